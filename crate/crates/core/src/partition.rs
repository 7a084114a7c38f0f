//! State partitions with linear-time splitting.
//!
//! States live in one global array; every block owns a contiguous interval
//! `[begin, end)` of it, so moving a state between sibling blocks is a swap.
//! Blocks are kept in a doubly linked list in creation order, new blocks go
//! to the tail, and [`Partition::move_to_end`] reorders in O(1).
//!
//! A split round marks the states of some set `S`. Afterwards, until
//! [`Partition::clear_round`], [`Partition::intersection`] answers for every
//! block `B`:
//!
//! * `None` if `B` was not touched,
//! * `Some(B)` if `B ⊆ S` or `B` is a block created by the round,
//! * `Some(C)` if `B` was split, `B` now being `B ∖ S` and `C` the new `B ∩ S`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::error::PartitionError;
use crate::stateset::{StateId, StateSet};

/// Handle to a block. Handles are never reused within one partition.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockId(u32);

impl BlockId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A proper split performed in a round: `child = parent ∩ S` was carved out
/// of `parent`, which keeps `parent ∖ S`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub parent: BlockId,
    pub child: BlockId,
}

#[derive(Clone, Debug)]
struct Block {
    begin: usize,
    end: usize,
    prev: Option<BlockId>,
    next: Option<BlockId>,
    intersection: Option<BlockId>,
    marked: usize,
}

#[derive(Clone, Debug)]
pub struct Partition {
    elems: Vec<StateId>,
    pos: Vec<usize>,
    block_of: Vec<BlockId>,
    blocks: Vec<Block>,
    head: Option<BlockId>,
    tail: Option<BlockId>,
    num_blocks: usize,
    touched: Vec<BlockId>,
}

impl Partition {
    fn with_order(elems: Vec<StateId>, bounds: &[usize]) -> Partition {
        let n = elems.len();
        let mut p = Partition {
            pos: vec![0; n],
            block_of: vec![BlockId(0); n],
            elems,
            blocks: Vec::new(),
            head: None,
            tail: None,
            num_blocks: 0,
            touched: Vec::new(),
        };
        for (i, &s) in p.elems.iter().enumerate() {
            p.pos[s] = i;
        }
        for w in bounds.windows(2) {
            let b = p.new_block(w[0], w[1]);
            for i in w[0]..w[1] {
                p.block_of[p.elems[i]] = b;
            }
        }
        p
    }

    /// `{Σ}`; the empty universe has no blocks.
    pub fn trivial(n: usize) -> Partition {
        let bounds: &[usize] = if n == 0 { &[0] } else { &[0, n] };
        Self::with_order((0..n).collect(), bounds)
    }

    pub fn discrete(n: usize) -> Partition {
        let bounds: Vec<usize> = (0..=n).collect();
        Self::with_order((0..n).collect(), &bounds)
    }

    /// Builds a partition from explicit blocks, in the given order.
    pub fn from_classes(n: usize, classes: &[Vec<StateId>]) -> Result<Partition, PartitionError> {
        let mut seen = vec![false; n];
        let mut elems = Vec::with_capacity(n);
        let mut bounds = vec![0];
        for class in classes {
            if class.is_empty() {
                return Err(PartitionError::EmptyBlock);
            }
            for &s in class {
                if s >= n {
                    return Err(PartitionError::StateOutOfRange {
                        state: s,
                        universe: n,
                    });
                }
                if std::mem::replace(&mut seen[s], true) {
                    return Err(PartitionError::Overlap(s));
                }
                elems.push(s);
            }
            bounds.push(elems.len());
        }
        if let Some(s) = seen.iter().position(|&v| !v) {
            return Err(PartitionError::Uncovered(s));
        }
        Ok(Self::with_order(elems, &bounds))
    }

    /// Groups states by `key`; blocks are ordered by their smallest state.
    pub fn from_key<K: Eq + Hash, F: FnMut(StateId) -> K>(n: usize, mut key: F) -> Partition {
        let mut index: HashMap<K, usize> = HashMap::new();
        let mut classes: Vec<Vec<StateId>> = Vec::new();
        for s in 0..n {
            let next = classes.len();
            let c = *index.entry(key(s)).or_insert(next);
            if c == next {
                classes.push(Vec::new());
            }
            classes[c].push(s);
        }
        Self::from_classes(n, &classes).expect("classes of a key function partition Σ")
    }

    fn new_block(&mut self, begin: usize, end: usize) -> BlockId {
        let id = BlockId(self.blocks.len() as u32);
        self.blocks.push(Block {
            begin,
            end,
            prev: self.tail,
            next: None,
            intersection: None,
            marked: 0,
        });
        match self.tail {
            Some(t) => self.blocks[t.index()].next = Some(id),
            None => self.head = Some(id),
        }
        self.tail = Some(id);
        self.num_blocks += 1;
        id
    }

    pub fn universe(&self) -> usize {
        self.elems.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    /// `|Σ| − |P|`: the number of proper splits still possible.
    pub fn height(&self) -> usize {
        self.universe() - self.num_blocks
    }

    /// Number of block handles allocated so far; every live handle indexes
    /// below it, so callers can keep side tables per block.
    pub fn block_capacity(&self) -> usize {
        self.blocks.len()
    }

    pub fn first(&self) -> Option<BlockId> {
        self.head
    }

    pub fn next(&self, b: BlockId) -> Option<BlockId> {
        self.blocks[b.index()].next
    }

    /// Blocks in list order.
    pub fn blocks(&self) -> Blocks<'_> {
        Blocks {
            partition: self,
            cur: self.head,
        }
    }

    pub fn states(&self, b: BlockId) -> &[StateId] {
        let blk = &self.blocks[b.index()];
        &self.elems[blk.begin..blk.end]
    }

    pub fn block_len(&self, b: BlockId) -> usize {
        let blk = &self.blocks[b.index()];
        blk.end - blk.begin
    }

    pub fn block_of(&self, s: StateId) -> BlockId {
        self.block_of[s]
    }

    pub fn block_set(&self, b: BlockId) -> StateSet {
        StateSet::from_states(self.universe(), self.states(b).iter().copied())
    }

    /// Splits every block by `S` (duplicates allowed) and leaves the round's
    /// intersection handles set. Returns the proper splits, whose children
    /// have been appended to the block list in that order.
    pub fn split<I: IntoIterator<Item = StateId>>(&mut self, set: I) -> Vec<Split> {
        let first_touched = self.touched.len();
        for s in set {
            let b = self.block_of[s];
            let blk = &self.blocks[b.index()];
            let boundary = blk.end - blk.marked;
            if blk.intersection == Some(b) || self.pos[s] >= boundary {
                continue;
            }
            if blk.marked == 0 {
                self.touched.push(b);
            }
            let target = boundary - 1;
            let other = self.elems[target];
            let from = self.pos[s];
            self.elems.swap(from, target);
            self.pos[other] = from;
            self.pos[s] = target;
            self.blocks[b.index()].marked += 1;
        }

        let mut splits = Vec::new();
        for i in first_touched..self.touched.len() {
            let b = self.touched[i];
            let blk = &self.blocks[b.index()];
            let (begin, end, marked) = (blk.begin, blk.end, blk.marked);
            self.blocks[b.index()].marked = 0;
            if marked == end - begin {
                self.blocks[b.index()].intersection = Some(b);
                continue;
            }
            let child = self.new_block(end - marked, end);
            self.blocks[b.index()].end = end - marked;
            self.blocks[b.index()].intersection = Some(child);
            self.blocks[child.index()].intersection = Some(child);
            for k in end - marked..end {
                self.block_of[self.elems[k]] = child;
            }
            self.touched.push(child);
            splits.push(Split { parent: b, child });
        }
        splits
    }

    pub fn intersection(&self, b: BlockId) -> Option<BlockId> {
        self.blocks[b.index()].intersection
    }

    /// Blocks whose intersection handle is currently set.
    pub fn touched(&self) -> &[BlockId] {
        &self.touched
    }

    pub fn clear_round(&mut self) {
        for b in std::mem::take(&mut self.touched) {
            self.blocks[b.index()].intersection = None;
        }
    }

    /// `P ⋏ {S, ∁S}` in place. Returns the proper splits.
    pub fn split_by_set(&mut self, set: &StateSet) -> Vec<Split> {
        let splits = self.split(set.iter());
        self.clear_round();
        splits
    }

    /// Unlinks `b` and reinserts it at the tail of the block list.
    pub fn move_to_end(&mut self, b: BlockId) {
        if self.tail == Some(b) {
            return;
        }
        let (prev, next) = {
            let blk = &self.blocks[b.index()];
            (blk.prev, blk.next)
        };
        match prev {
            Some(p) => self.blocks[p.index()].next = next,
            None => self.head = next,
        }
        if let Some(nx) = next {
            self.blocks[nx.index()].prev = prev;
        }
        let tail = self.tail.expect("nonempty list has a tail");
        self.blocks[tail.index()].next = Some(b);
        self.blocks[b.index()].prev = Some(tail);
        self.blocks[b.index()].next = None;
        self.tail = Some(b);
    }

    /// Blocks as sorted state lists, ordered by smallest state.
    pub fn canonical(&self) -> Vec<Vec<StateId>> {
        let mut out: Vec<Vec<StateId>> = self
            .blocks()
            .map(|b| {
                let mut v = self.states(b).to_vec();
                v.sort_unstable();
                v
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// `P1 ⋏ P2`: the coarsest common refinement.
    pub fn meet(&self, other: &Partition) -> Result<Partition, PartitionError> {
        self.same_universe(other)?;
        Ok(Partition::from_key(self.universe(), |s| {
            (self.block_of(s), other.block_of(s))
        }))
    }

    /// `self ⪯ other`: every block of `self` lies inside a block of `other`.
    /// Partitions over different universes are incomparable.
    pub fn refines(&self, other: &Partition) -> bool {
        self.same_universe(other).is_ok()
            && self.blocks().all(|b| {
                let states = self.states(b);
                let target = other.block_of(states[0]);
                states.iter().all(|&s| other.block_of(s) == target)
            })
    }

    fn same_universe(&self, other: &Partition) -> Result<(), PartitionError> {
        if self.universe() == other.universe() {
            Ok(())
        } else {
            Err(PartitionError::UniverseMismatch {
                left: self.universe(),
                right: other.universe(),
            })
        }
    }

    /// Sorted blocks of sorted states, states printed as `s + base`.
    pub fn render(&self, base: usize) -> String {
        let blocks: Vec<String> = self
            .canonical()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|s| (s + base).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        format!("{{{}}}", blocks.join(" | "))
    }

    /// Checks the structural invariants; used by tests and debug sweeps.
    pub fn check_invariants(&self) {
        let n = self.universe();
        let mut count = 0;
        let mut covered = 0;
        let mut prev = None;
        let mut cur = self.head;
        while let Some(b) = cur {
            let blk = &self.blocks[b.index()];
            assert_eq!(blk.prev, prev, "broken back link at {b:?}");
            assert!(blk.begin < blk.end, "empty block {b:?}");
            for i in blk.begin..blk.end {
                let s = self.elems[i];
                assert_eq!(self.pos[s], i);
                assert_eq!(self.block_of[s], b);
            }
            covered += blk.end - blk.begin;
            count += 1;
            prev = cur;
            cur = blk.next;
        }
        assert_eq!(self.tail, prev);
        assert_eq!(count, self.num_blocks);
        assert_eq!(covered, n);
    }
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.universe() == other.universe()
            && self.num_blocks() == other.num_blocks()
            && self.refines(other)
    }
}

impl Eq for Partition {}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(0))
    }
}

pub struct Blocks<'a> {
    partition: &'a Partition,
    cur: Option<BlockId>,
}

impl Iterator for Blocks<'_> {
    type Item = BlockId;

    fn next(&mut self) -> Option<BlockId> {
        let b = self.cur?;
        self.cur = self.partition.next(b);
        Some(b)
    }
}
