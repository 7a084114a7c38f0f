//! Simulation equivalence through disjunctive domains kept as a partition
//! plus a partial order on its blocks.
//!
//! A disjunctive domain `A` is determined by `pr(A)` and the order
//! `B ⊴ C ⇔ γ(α(B)) ⊆ γ(α(C))`. Each block stores `less`, the blocks below
//! it, and its image `γ(α(B))` is the union of those. Refining `A` by a set
//! `S` splits the partition by `S` and then updates the order locally.

use std::collections::HashSet;

use crate::domain::MooreDomain;
use crate::error::DomainError;
use crate::kripke::KripkeStructure;
use crate::partition::{BlockId, Partition};
use crate::stateset::{StateId, StateSet, Subset};

#[derive(Clone, Debug)]
pub struct PosetDomain {
    partition: Partition,
    less: Vec<Vec<BlockId>>,
    changed: Vec<bool>,
}

impl PosetDomain {
    /// `{∅, Σ}` over `n` states: one block, below itself.
    pub fn top(n: usize) -> PosetDomain {
        let partition = Partition::trivial(n);
        let less = partition.blocks().map(|b| vec![b]).collect();
        PosetDomain {
            changed: vec![false; partition.block_capacity()],
            partition,
            less,
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Blocks `C` with `C ⊴ B`, `B` included.
    pub fn less(&self, b: BlockId) -> &[BlockId] {
        &self.less[b.index()]
    }

    /// `γ(α(B))`, the union of the blocks below `B`.
    pub fn image_of_block(&self, b: BlockId) -> StateSet {
        let mut out = StateSet::empty(self.partition.universe());
        for &c in &self.less[b.index()] {
            for &s in self.partition.states(c) {
                out.insert(s);
            }
        }
        out
    }

    /// Splits the partition by `S` (duplicates allowed). New blocks start
    /// with a copy of their parent's `less` list. Must be followed by
    /// [`order_update`](Self::order_update).
    pub fn ds_split<I: IntoIterator<Item = StateId>>(&mut self, set: I) {
        let splits = self.partition.split(set);
        let cap = self.partition.block_capacity();
        self.less.resize(cap, Vec::new());
        self.changed.resize(cap, false);
        for s in splits {
            self.less[s.child.index()] = self.less[s.parent.index()].clone();
            self.changed[s.child.index()] = false;
        }
    }

    /// Rewrites every `less` list for the domain refined by the set of the
    /// preceding [`ds_split`](Self::ds_split), ends the split round, and
    /// returns the blocks whose image shrank.
    pub fn order_update(&mut self) -> Vec<BlockId> {
        let p = &self.partition;
        let mut shrunk = Vec::new();
        for b in p.blocks() {
            let old = std::mem::take(&mut self.less[b.index()]);
            let mut new = Vec::with_capacity(old.len() + 1);
            if p.intersection(b) != Some(b) {
                // B ∩ S = ∅: everything below the parent stays below,
                // including the parts of split blocks that fell inside S.
                for &c in &old {
                    new.push(c);
                    if let Some(x) = p.intersection(c) {
                        if x != c {
                            new.push(x);
                        }
                    }
                }
            } else {
                // B ⊆ S: only what lies inside S stays below.
                let mut lost = false;
                for &c in &old {
                    match p.intersection(c) {
                        Some(x) if x == c => new.push(c),
                        Some(x) => {
                            new.push(x);
                            lost = true;
                        }
                        None => lost = true,
                    }
                }
                if lost {
                    self.changed[b.index()] = true;
                    shrunk.push(b);
                }
            }
            new.sort_unstable();
            new.dedup();
            self.less[b.index()] = new;
        }
        self.partition.clear_round();
        for &b in &shrunk {
            self.changed[b.index()] = false;
        }
        shrunk
    }

    /// `D(γ(A) ∪ {S})`. Returns the blocks whose image shrank.
    pub fn refine<I: IntoIterator<Item = StateId>>(&mut self, set: I) -> Vec<BlockId> {
        self.ds_split(set);
        self.order_update()
    }

    /// The represented domain as an explicit family.
    pub fn to_moore(&self) -> Result<MooreDomain, DomainError> {
        let images: Vec<Subset> = self
            .partition
            .blocks()
            .map(|b| Subset::from_state_set(&self.image_of_block(b)))
            .collect();
        MooreDomain::disjunctive_completion(self.partition.universe(), images)
    }

    /// The order as `(C, B)` pairs with `C ⊴ B`, `C ≠ B`.
    pub fn order_edges(&self) -> Vec<(BlockId, BlockId)> {
        self.partition
            .blocks()
            .flat_map(|b| {
                self.less[b.index()]
                    .iter()
                    .filter(move |&&c| c != b)
                    .map(move |&c| (c, b))
            })
            .collect()
    }

    /// Reflexivity, antisymmetry, and no dangling handles.
    pub fn check_order(&self) -> Result<(), String> {
        let live: HashSet<BlockId> = self.partition.blocks().collect();
        for b in self.partition.blocks() {
            let less = &self.less[b.index()];
            if !less.contains(&b) {
                return Err(format!("{b:?} is not below itself"));
            }
            for &c in less {
                if !live.contains(&c) {
                    return Err(format!("{b:?} refers to dead block {c:?}"));
                }
                if c != b && self.less[c.index()].contains(&b) {
                    return Err(format!("{b:?} and {c:?} are below each other"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct SimStats {
    /// Blocks after the atom phase.
    pub initial_blocks: usize,
    /// Blocks visited by the main scan.
    pub scan_iterations: usize,
    /// Image shrink events during the main scan.
    pub changed_events: usize,
}

pub fn sim_refine(ks: &KripkeStructure) -> (PosetDomain, Partition) {
    let (d, _) = sim_refine_with_stats(ks);
    let p = d.partition().clone();
    (d, p)
}

pub fn sim_refine_with_stats(ks: &KripkeStructure) -> (PosetDomain, SimStats) {
    let n = ks.num_states();
    let mut d = PosetDomain::top(n);
    let mut stats = SimStats::default();

    for atom in 0..ks.atoms().len() {
        let set = ks.atom_states(atom);
        if set.is_empty() || set.len() == n {
            continue;
        }
        d.refine(set.iter());
        d.refine(set.complement().iter());
    }
    stats.initial_blocks = d.partition.num_blocks();

    let mut mark = vec![false; n];
    let mut pre: Vec<StateId> = Vec::new();
    let mut cur = d.partition.first();
    while let Some(b) = cur {
        stats.scan_iterations += 1;
        pre.clear();
        for &c in &d.less[b.index()] {
            for &s in d.partition.states(c) {
                for &r in ks.predecessors(s) {
                    if !mark[r] {
                        mark[r] = true;
                        pre.push(r);
                    }
                }
            }
        }
        for &r in &pre {
            mark[r] = false;
        }
        d.ds_split(pre.iter().copied());
        let shrunk = d.order_update();
        stats.changed_events += shrunk.len();

        let mut moved = vec![false; d.partition.block_capacity()];
        for &x in &shrunk {
            moved[x.index()] = true;
        }
        let mut next = d.partition.next(b);
        while let Some(x) = next {
            if !moved[x.index()] {
                break;
            }
            next = d.partition.next(x);
        }
        for &x in &shrunk {
            d.partition.move_to_end(x);
        }
        cur = next.or_else(|| shrunk.first().copied());
    }
    (d, stats)
}

/// How labels must relate for one state to simulate another.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum LabelMatch {
    /// `ℓ(s) = ℓ(s')`, the condition under which [`sim_refine`] agrees.
    #[default]
    Equal,
    /// `ℓ(s') ⊆ ℓ(s)`.
    Contained,
}

/// Mutual-simulation classes of the largest simulation, by removing
/// violating pairs until none remain.
pub fn naive_simulation(ks: &KripkeStructure, labels: LabelMatch) -> Partition {
    let n = ks.num_states();
    let label_ok = |s: usize, s2: usize| {
        let (a, b) = (ks.labels(s), ks.labels(s2));
        match labels {
            LabelMatch::Equal => a == b,
            LabelMatch::Contained => b.iter().all(|x| a.binary_search(x).is_ok()),
        }
    };
    // sim[s][s2]: s2 simulates s.
    let mut sim: Vec<Vec<bool>> = (0..n)
        .map(|s| (0..n).map(|s2| label_ok(s, s2)).collect())
        .collect();
    loop {
        let mut removed = false;
        for s in 0..n {
            for s2 in 0..n {
                if sim[s][s2]
                    && !ks
                        .successors(s)
                        .iter()
                        .all(|&t| ks.successors(s2).iter().any(|&t2| sim[t][t2]))
                {
                    sim[s][s2] = false;
                    removed = true;
                }
            }
        }
        if !removed {
            break;
        }
    }
    Partition::from_key(n, |s| {
        (0..n)
            .map(|t| sim[s][t] && sim[t][s])
            .collect::<Vec<bool>>()
    })
}
