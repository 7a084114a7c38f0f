//! Divergence-blind stuttering equivalence by splitting with `EU(B1, B2)`
//! over pairs of blocks.

use std::collections::{HashSet, VecDeque};

use crate::kripke::KripkeStructure;
use crate::partition::{BlockId, Partition, Split};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct GvStats {
    /// Block pairs whose `EU` image was computed.
    pub pairs_checked: usize,
    /// Proper block splits performed.
    pub splits: usize,
}

/// `P ⋏ {EU(B1, B2), ∁EU(B1, B2)}` in place.
pub fn gv_split(ks: &KripkeStructure, p: &mut Partition, b1: BlockId, b2: BlockId) -> Vec<Split> {
    let eu = ks.eu(&p.block_set(b1), &p.block_set(b2));
    p.split_by_set(&eu)
}

/// Coarsest refinement of `p` stable under `EU` for every ordered pair of
/// blocks. From the label partition this is divergence-blind stuttering
/// equivalence.
pub fn gv_refine(ks: &KripkeStructure, p: &Partition) -> Partition {
    gv_refine_with_stats(ks, p).0
}

/// Pairs are kept in a worklist. After a split, only pairs involving one of
/// the blocks that changed are queued again: the image of an untouched pair
/// was a union of blocks and stays one under refinement.
pub fn gv_refine_with_stats(ks: &KripkeStructure, p: &Partition) -> (Partition, GvStats) {
    let mut p = p.clone();
    let mut stats = GvStats::default();
    let mut queue: VecDeque<(BlockId, BlockId)> = VecDeque::new();
    let mut queued: HashSet<(BlockId, BlockId)> = HashSet::new();
    let blocks: Vec<BlockId> = p.blocks().collect();
    for &a in &blocks {
        for &b in &blocks {
            if a != b && queued.insert((a, b)) {
                queue.push_back((a, b));
            }
        }
    }

    while let Some((b1, b2)) = queue.pop_front() {
        queued.remove(&(b1, b2));
        stats.pairs_checked += 1;
        let splits = gv_split(ks, &mut p, b1, b2);
        if splits.is_empty() {
            continue;
        }
        stats.splits += splits.len();
        let changed: Vec<BlockId> = splits.iter().flat_map(|s| [s.parent, s.child]).collect();
        let current: Vec<BlockId> = p.blocks().collect();
        for &c in &changed {
            for &d in &current {
                for pair in [(c, d), (d, c)] {
                    if pair.0 != pair.1 && queued.insert(pair) {
                        queue.push_back(pair);
                    }
                }
            }
        }
    }
    (p, stats)
}

/// Largest divergence-blind stuttering relation, by removing violating
/// pairs from `{(s, s') | ℓ(s) = ℓ(s')}` until none remain.
pub fn naive_dbs(ks: &KripkeStructure) -> Partition {
    let n = ks.num_states();
    let mut rel: Vec<Vec<bool>> = (0..n)
        .map(|s| (0..n).map(|t| ks.labels(s) == ks.labels(t)).collect())
        .collect();
    loop {
        let mut removed = false;
        for s in 0..n {
            for s2 in 0..n {
                if rel[s][s2] && !transfer_holds(ks, &rel, s, s2) {
                    rel[s][s2] = false;
                    rel[s2][s] = false;
                    removed = true;
                }
            }
        }
        if !removed {
            break;
        }
    }
    Partition::from_key(n, |s| rel[s].clone())
}

/// Condition (2) for `s R s'`: every step `s → t` is matched by a path
/// `s' = t0 → … → tk` with `s R ti` for `i < k` and `t R tk`.
fn transfer_holds(ks: &KripkeStructure, rel: &[Vec<bool>], s: usize, s2: usize) -> bool {
    let n = ks.num_states();
    let mut reach = vec![false; n];
    reach[s2] = true;
    let mut stack = vec![s2];
    while let Some(u) = stack.pop() {
        if !rel[s][u] {
            continue;
        }
        for &v in ks.successors(u) {
            if !reach[v] {
                reach[v] = true;
                stack.push(v);
            }
        }
    }
    ks.successors(s)
        .iter()
        .all(|&t| (0..n).any(|tk| reach[tk] && rel[t][tk]))
}
