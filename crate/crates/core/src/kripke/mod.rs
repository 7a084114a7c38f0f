//! Kripke structures, edge-labelled systems and their semantic operators.
//!
//! A [`KripkeStructure`] is `(Σ, →, ℓ)`: dense states, a transition relation
//! stored both forward and backward, and a labeling into a catalog of atoms.
//! Edge-labelled systems read from `.aut` files are turned into Kripke
//! structures with [`edge_to_node_labels`].

mod aut;
mod native;
mod scc;

pub use aut::{parse_aut, write_aut, LabeledTs};
pub use native::{parse_kripke, write_kripke};
pub use scc::SccDag;

use std::collections::HashMap;

use crate::error::KripkeError;
use crate::partition::Partition;
use crate::stateset::{StateId, StateSet};

pub type AtomId = usize;

/// Atom given to the original states by [`edge_to_node_labels`].
pub const STATE_ATOM: &str = "⊥state";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeStructure {
    forward: Vec<Vec<StateId>>,
    backward: Vec<Vec<StateId>>,
    labels: Vec<Vec<AtomId>>,
    atoms: Vec<String>,
    num_transitions: usize,
}

/// Incremental construction of a [`KripkeStructure`].
#[derive(Clone, Debug, Default)]
pub struct KripkeBuilder {
    num_states: usize,
    edges: Vec<(StateId, StateId)>,
    labels: Vec<Vec<AtomId>>,
    atoms: Vec<String>,
    atom_index: HashMap<String, AtomId>,
    out_of_range: Option<StateId>,
}

impl KripkeBuilder {
    pub fn new(num_states: usize) -> Self {
        KripkeBuilder {
            num_states,
            labels: vec![Vec::new(); num_states],
            ..Default::default()
        }
    }

    /// Registers `name` in the atom catalog (idempotent) and returns its id.
    pub fn atom(&mut self, name: &str) -> AtomId {
        if let Some(&id) = self.atom_index.get(name) {
            return id;
        }
        let id = self.atoms.len();
        self.atoms.push(name.to_string());
        self.atom_index.insert(name.to_string(), id);
        id
    }

    pub fn label(&mut self, state: StateId, atom: &str) -> &mut Self {
        let id = self.atom(atom);
        if state < self.num_states {
            self.labels[state].push(id);
        } else {
            self.out_of_range.get_or_insert(state);
        }
        self
    }

    pub fn edge(&mut self, from: StateId, to: StateId) -> &mut Self {
        self.edges.push((from, to));
        self
    }

    pub fn edges<I: IntoIterator<Item = (StateId, StateId)>>(&mut self, edges: I) -> &mut Self {
        self.edges.extend(edges);
        self
    }

    pub fn build(self) -> Result<KripkeStructure, KripkeError> {
        let n = self.num_states;
        if let Some(state) = self.out_of_range {
            return Err(KripkeError::StateOutOfRange {
                state,
                num_states: n,
            });
        }
        let mut forward = vec![Vec::new(); n];
        let mut backward = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            for s in [a, b] {
                if s >= n {
                    return Err(KripkeError::StateOutOfRange {
                        state: s,
                        num_states: n,
                    });
                }
            }
            forward[a].push(b);
        }
        let mut num_transitions = 0;
        for (a, succ) in forward.iter_mut().enumerate() {
            succ.sort_unstable();
            succ.dedup();
            num_transitions += succ.len();
            for &b in succ.iter() {
                backward[b].push(a);
            }
        }
        let mut labels = self.labels;
        for l in &mut labels {
            l.sort_unstable();
            l.dedup();
        }
        Ok(KripkeStructure {
            forward,
            backward,
            labels,
            atoms: self.atoms,
            num_transitions,
        })
    }
}

impl KripkeStructure {
    pub fn num_states(&self) -> usize {
        self.forward.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.num_transitions
    }

    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.forward[s]
    }

    pub fn predecessors(&self, s: StateId) -> &[StateId] {
        &self.backward[s]
    }

    /// All transitions in `(source, target)` order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.forward
            .iter()
            .enumerate()
            .flat_map(|(a, succ)| succ.iter().map(move |&b| (a, b)))
    }

    /// Sorted atom ids labelling `s`.
    pub fn labels(&self, s: StateId) -> &[AtomId] {
        &self.labels[s]
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_id(&self, name: &str) -> Option<AtomId> {
        self.atoms.iter().position(|a| a == name)
    }

    /// `⟦p⟧`, the states labelled with `atom`.
    pub fn atom_states(&self, atom: AtomId) -> StateSet {
        StateSet::from_states(
            self.num_states(),
            (0..self.num_states()).filter(|&s| self.labels[s].binary_search(&atom).is_ok()),
        )
    }

    /// `P_ℓ`: states grouped by identical label sets, blocks in order of
    /// first occurrence.
    pub fn label_partition(&self) -> Partition {
        Partition::from_key(self.num_states(), |s| self.labels[s].clone())
    }

    /// States without successors.
    pub fn non_total_states(&self) -> Vec<StateId> {
        (0..self.num_states())
            .filter(|&s| self.forward[s].is_empty())
            .collect()
    }

    pub fn check_total(&self) -> Result<(), KripkeError> {
        let states = self.non_total_states();
        if states.is_empty() {
            Ok(())
        } else {
            Err(KripkeError::NotTotal { states })
        }
    }

    /// Copy of `self` with a self-loop added on every state that has no
    /// successor.
    pub fn with_self_loops(&self) -> KripkeStructure {
        let mut out = self.clone();
        for s in self.non_total_states() {
            out.forward[s].push(s);
            let pos = out.backward[s].binary_search(&s).unwrap_or_else(|p| p);
            out.backward[s].insert(pos, s);
            out.num_transitions += 1;
        }
        out
    }

    /// `pre(S) = {a | ∃b ∈ S. a → b}`.
    pub fn pre(&self, set: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.num_states());
        for b in set.iter() {
            for &a in &self.backward[b] {
                out.insert(a);
            }
        }
        out
    }

    /// `post(S) = {b | ∃a ∈ S. a → b}`.
    pub fn post(&self, set: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.num_states());
        for a in set.iter() {
            for &b in &self.forward[a] {
                out.insert(b);
            }
        }
        out
    }

    /// `∁ ∘ pre ∘ ∁`: states all of whose successors lie in `S`.
    pub fn pre_tilde(&self, set: &StateSet) -> StateSet {
        self.pre(&set.complement()).complement()
    }

    /// `∁ ∘ post ∘ ∁`: states all of whose predecessors lie in `S`.
    pub fn post_tilde(&self, set: &StateSet) -> StateSet {
        self.post(&set.complement()).complement()
    }

    /// Existential until: `S2` plus the states of `S1` that reach `S2` along
    /// a path staying in `S1` until its last step.
    pub fn eu(&self, stay: &StateSet, target: &StateSet) -> StateSet {
        let mut result = target.clone();
        let mut stack: Vec<StateId> = target.iter().collect();
        while let Some(b) = stack.pop() {
            for &a in &self.backward[b] {
                if stay.contains(a) && result.insert(a) {
                    stack.push(a);
                }
            }
        }
        result
    }

    /// Existential reachability, `EU(Σ, S)`.
    pub fn ef(&self, target: &StateSet) -> StateSet {
        let mut result = target.clone();
        let mut stack: Vec<StateId> = target.iter().collect();
        while let Some(b) = stack.pop() {
            for &a in &self.backward[b] {
                if result.insert(a) {
                    stack.push(a);
                }
            }
        }
        result
    }

    pub fn scc_dag(&self) -> SccDag {
        SccDag::new(self)
    }
}

/// Replaces every edge `s --l--> t` by `s → n → t` where `n` is a fresh state
/// labelled `{l}`. Original states are labelled [`STATE_ATOM`]. New states are
/// numbered after the original ones, in edge order.
pub fn edge_to_node_labels(lts: &LabeledTs) -> KripkeStructure {
    let n = lts.num_states;
    let mut builder = KripkeBuilder::new(n + lts.edges.len());
    builder.atom(STATE_ATOM);
    for s in 0..n {
        builder.label(s, STATE_ATOM);
    }
    for (i, (src, label, dst)) in lts.edges.iter().enumerate() {
        let node = n + i;
        builder.label(node, label);
        builder.edge(*src, node).edge(node, *dst);
    }
    builder
        .build()
        .expect("a validated LabeledTs yields in-range states")
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::stateset::Subset;

    /// The five-state structure of the running example, states 1..=5 stored
    /// as 0..=4. States 1, 2, 3, 5 carry `p` and state 4 carries `q`.
    pub(crate) fn five_states() -> KripkeStructure {
        let mut b = KripkeBuilder::new(5);
        for s in [1, 2, 3, 5] {
            b.label(s - 1, "p");
        }
        b.label(3, "q");
        let edges = [
            (1, 2),
            (1, 3),
            (1, 4),
            (1, 5),
            (2, 1),
            (3, 2),
            (3, 4),
            (4, 3),
            (5, 3),
            (5, 4),
            (5, 5),
        ];
        b.edges(edges.iter().map(|&(a, b)| (a - 1, b - 1)));
        b.build().unwrap()
    }

    /// `R = {(1,2), (2,3), (3,4), (4,4)}` on four unlabelled states.
    pub(crate) fn chain4() -> KripkeStructure {
        let mut b = KripkeBuilder::new(4);
        b.edges([(0, 1), (1, 2), (2, 3), (3, 3)]);
        b.build().unwrap()
    }

    /// One-based state list to a set.
    pub(crate) fn set1(n: usize, states: &[usize]) -> StateSet {
        StateSet::from_states(n, states.iter().map(|s| s - 1))
    }

    fn random_ks(seed: u64, n: usize) -> KripkeStructure {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut b = KripkeBuilder::new(n);
        for _ in 0..rng.gen_range(0..=2 * n) {
            b.edge(rng.gen_range(0..n), rng.gen_range(0..n));
        }
        b.build().unwrap()
    }

    fn all_sets(n: usize) -> impl Iterator<Item = StateSet> {
        (0u32..1 << n).map(move |m| Subset(m).to_state_set(n))
    }

    #[test]
    fn pre_on_running_example() {
        let ks = five_states();
        assert_eq!(ks.pre(&set1(5, &[4])), set1(5, &[1, 3, 5]));
        assert_eq!(ks.pre(&set1(5, &[1, 3, 5])), set1(5, &[1, 2, 4, 5]));
        assert!(ks.pre(&StateSet::empty(5)).is_empty());
    }

    #[test]
    fn transpose_consistency() {
        let ks = five_states();
        for (a, b) in ks.transitions() {
            assert!(ks.predecessors(b).contains(&a));
        }
        let back: usize = (0..5).map(|s| ks.predecessors(s).len()).sum();
        assert_eq!(back, ks.num_transitions());
    }

    #[test]
    fn duplicate_edges_are_merged() {
        let mut b = KripkeBuilder::new(2);
        b.edges([(0, 1), (0, 1), (1, 0)]);
        let ks = b.build().unwrap();
        assert_eq!(ks.num_transitions(), 2);
        assert_eq!(ks.predecessors(1), &[0]);
    }

    #[test]
    fn out_of_range_edge_rejected() {
        let mut b = KripkeBuilder::new(2);
        b.edge(0, 2);
        assert_eq!(
            b.build(),
            Err(KripkeError::StateOutOfRange {
                state: 2,
                num_states: 2
            })
        );
    }

    #[test]
    fn post_and_tildes() {
        let ks = chain4();
        assert_eq!(ks.post(&set1(4, &[2])), set1(4, &[3]));
        assert_eq!(ks.pre_tilde(&StateSet::full(4)), StateSet::full(4));
        for seed in 0..5 {
            let ks = random_ks(seed, 6);
            for s in all_sets(6) {
                assert_eq!(ks.pre_tilde(&s), ks.pre(&s.complement()).complement());
                assert_eq!(ks.post_tilde(&s), ks.post(&s.complement()).complement());
            }
        }
    }

    #[test]
    fn pre_post_adjunction_and_additivity() {
        for seed in 0..4 {
            let ks = random_ks(100 + seed, 5);
            let sets: Vec<_> = all_sets(5).collect();
            for s in &sets {
                for t in &sets {
                    assert_eq!(ks.post(s).is_subset(t), s.is_subset(&ks.pre_tilde(t)));
                    let u = s.union(t);
                    assert_eq!(ks.pre(&u), ks.pre(s).union(&ks.pre(t)));
                    assert_eq!(ks.post(&u), ks.post(s).union(&ks.post(t)));
                }
            }
        }
    }

    /// Path-enumeration oracle for EU: depth-first search over simple
    /// paths of length at most |Σ|.
    fn eu_by_paths(ks: &KripkeStructure, stay: &StateSet, target: &StateSet) -> StateSet {
        fn search(
            ks: &KripkeStructure,
            s: StateId,
            stay: &StateSet,
            target: &StateSet,
            depth: usize,
        ) -> bool {
            if target.contains(s) {
                return true;
            }
            if depth == 0 || !stay.contains(s) {
                return false;
            }
            ks.successors(s)
                .iter()
                .any(|&t| search(ks, t, stay, target, depth - 1))
        }
        let n = ks.num_states();
        StateSet::from_states(n, (0..n).filter(|&s| search(ks, s, stay, target, n)))
    }

    #[test]
    fn eu_matches_path_enumeration() {
        for seed in 0..6 {
            let ks = random_ks(200 + seed, 6);
            let sets: Vec<_> = all_sets(6).step_by(3).collect();
            for s1 in &sets {
                for s2 in &sets {
                    let eu = ks.eu(s1, s2);
                    assert_eq!(eu, eu_by_paths(&ks, s1, s2));
                    assert!(s2.is_subset(&eu));
                }
                assert_eq!(ks.eu(&StateSet::empty(6), s1), *s1);
                assert_eq!(ks.eu(&StateSet::full(6), s1), ks.ef(s1));
            }
        }
    }

    #[test]
    fn eu_additive_in_second_argument() {
        let ks = random_ks(7, 5);
        let sets: Vec<_> = all_sets(5).collect();
        for s1 in sets.iter().step_by(5) {
            for a in &sets {
                for b in sets.iter().step_by(7) {
                    assert_eq!(ks.eu(s1, &a.union(b)), ks.eu(s1, a).union(&ks.eu(s1, b)));
                }
            }
        }
    }

    #[test]
    fn ef_is_upper_closure() {
        let ks = chain4();
        assert_eq!(ks.ef(&set1(4, &[4])), StateSet::full(4));
        assert!(ks.ef(&StateSet::empty(4)).is_empty());
        for seed in 0..4 {
            let ks = random_ks(300 + seed, 6);
            let sets: Vec<_> = all_sets(6).collect();
            for s in &sets {
                let e = ks.ef(s);
                assert!(s.is_subset(&e));
                assert_eq!(ks.ef(&e), e);
                for t in sets.iter().step_by(11) {
                    if s.is_subset(t) {
                        assert!(e.is_subset(&ks.ef(t)));
                    }
                }
            }
        }
    }

    #[test]
    fn label_partition_groups_equal_label_sets() {
        let ks = five_states();
        assert_eq!(ks.label_partition().to_string(), "{0 1 2 4 | 3}");
        let bare = chain4();
        assert_eq!(bare.label_partition().num_blocks(), 1);
        let mut b = KripkeBuilder::new(3);
        b.label(0, "a").label(1, "b").label(2, "a").label(2, "b");
        assert_eq!(b.build().unwrap().label_partition().num_blocks(), 3);
    }

    #[test]
    fn totality_helpers() {
        let mut b = KripkeBuilder::new(3);
        b.edges([(0, 1)]);
        let ks = b.build().unwrap();
        assert_eq!(ks.non_total_states(), vec![1, 2]);
        assert!(ks.check_total().is_err());
        let looped = ks.with_self_loops();
        assert!(looped.check_total().is_ok());
        assert_eq!(looped.num_transitions(), 3);
        assert_eq!(looped.predecessors(1), &[0, 1]);
    }

    #[test]
    fn edge_to_node_transform() {
        let lts = LabeledTs {
            num_states: 2,
            initial: 0,
            edges: vec![(0, "a".into(), 1)],
        };
        let ks = edge_to_node_labels(&lts);
        assert_eq!(ks.num_states(), 3);
        assert_eq!(ks.transitions().collect::<Vec<_>>(), vec![(0, 2), (2, 1)]);
        let a = ks.atom_id("a").unwrap();
        assert_eq!(ks.labels(2), &[a]);
        assert_eq!(ks.labels(0), &[ks.atom_id(STATE_ATOM).unwrap()]);

        let empty = LabeledTs {
            num_states: 3,
            initial: 0,
            edges: vec![],
        };
        let ks = edge_to_node_labels(&empty);
        assert_eq!((ks.num_states(), ks.num_transitions()), (3, 0));
    }
}
