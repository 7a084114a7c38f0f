//! State sets.
//!
//! [`StateSet`] is the general bitset used by the semantic operators on
//! arbitrarily large structures. [`Subset`] is a `u32` mask used by the
//! explicit domain oracles, which never handle more than
//! [`MAX_UNIVERSE`](crate::domain::MAX_UNIVERSE) states.

use std::fmt;

use fixedbitset::FixedBitSet;

/// Dense state index in `[0, n)`.
pub type StateId = usize;

/// A subset of the states `[0, n)` of some structure.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet(FixedBitSet);

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        StateSet(bits)
    }

    pub fn from_states<I: IntoIterator<Item = StateId>>(universe: usize, states: I) -> Self {
        let mut set = Self::empty(universe);
        for s in states {
            set.insert(s);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.0.contains(s)
    }

    /// Inserts `s`, returning `true` if it was not already present.
    pub fn insert(&mut self, s: StateId) -> bool {
        !self.0.put(s)
    }

    pub fn remove(&mut self, s: StateId) {
        self.0.set(s, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.0.ones()
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &StateSet) {
        self.0.difference_with(&other.0);
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn complement(&self) -> StateSet {
        let mut out = self.clone();
        out.0.toggle_range(..);
        out
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A subset of at most 32 states packed into a mask; bit `i` is state `i`.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(universe: usize) -> Subset {
        debug_assert!(universe <= 32);
        if universe >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << universe) - 1)
        }
    }

    pub fn singleton(s: StateId) -> Subset {
        Subset(1 << s)
    }

    pub fn from_states<I: IntoIterator<Item = StateId>>(states: I) -> Subset {
        Subset(states.into_iter().fold(0, |acc, s| acc | (1 << s)))
    }

    pub fn from_state_set(set: &StateSet) -> Subset {
        Self::from_states(set.iter())
    }

    pub fn to_state_set(self, universe: usize) -> StateSet {
        StateSet::from_states(universe, self.iter())
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, s: StateId) -> bool {
        s < 32 && self.0 & (1 << s) != 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn complement(self, universe: usize) -> Subset {
        Subset(!self.0 & Self::full(universe).0)
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meets(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    /// Key of the canonical family order: cardinality first, then mask value.
    pub fn canonical_key(self) -> (u32, u32) {
        (self.0.count_ones(), self.0)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<StateId> for Subset {
    fn from_iter<I: IntoIterator<Item = StateId>>(iter: I) -> Self {
        Subset::from_states(iter)
    }
}

pub struct SubsetIter(u32);

impl Iterator for SubsetIter {
    type Item = StateId;

    fn next(&mut self) -> Option<StateId> {
        if self.0 == 0 {
            return None;
        }
        let s = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(s)
    }
}
