//! Coarsest stable refinement with respect to `pre` (strong bisimulation
//! when started from the label partition).

use std::collections::VecDeque;

use crate::kripke::KripkeStructure;
use crate::partition::{BlockId, Partition};
use crate::stateset::StateId;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct PtStats {
    /// Splitter blocks taken off the worklist.
    pub splitters: usize,
    /// Proper block splits performed.
    pub splits: usize,
}

/// Coarsest refinement of `p` in which every block is either inside or
/// disjoint from `pre(B)` for every block `B`.
pub fn pt_refine(ks: &KripkeStructure, p: &Partition) -> Partition {
    pt_refine_with_stats(ks, p).0
}

pub fn pt_refine_with_stats(ks: &KripkeStructure, p: &Partition) -> (Partition, PtStats) {
    let mut p = p.clone();
    let mut stats = PtStats::default();
    let mut queued = vec![false; p.block_capacity()];
    let mut queue: VecDeque<BlockId> = p.blocks().collect();
    for &b in &queue {
        queued[b.index()] = true;
    }
    let mut pre: Vec<StateId> = Vec::new();

    while let Some(b) = queue.pop_front() {
        queued[b.index()] = false;
        stats.splitters += 1;
        pre.clear();
        for &s in p.states(b) {
            pre.extend_from_slice(ks.predecessors(s));
        }
        let splits = p.split(pre.iter().copied());
        p.clear_round();
        stats.splits += splits.len();
        queued.resize(p.block_capacity(), false);
        for split in splits {
            for half in [split.parent, split.child] {
                if !queued[half.index()] {
                    queued[half.index()] = true;
                    queue.push_back(half);
                }
            }
        }
    }
    (p, stats)
}

/// Whether every block is inside or disjoint from `pre(B)` for every block
/// `B` of `p`.
pub fn is_pt_stable(ks: &KripkeStructure, p: &Partition) -> bool {
    let mut count = vec![0usize; p.block_capacity()];
    let mut mark = vec![false; ks.num_states()];
    for b in p.blocks() {
        let mut hit = Vec::new();
        for &s in p.states(b) {
            for &r in ks.predecessors(s) {
                if !mark[r] {
                    mark[r] = true;
                    hit.push(r);
                    count[p.block_of(r).index()] += 1;
                }
            }
        }
        let stable = hit.iter().all(|&r| {
            let c = p.block_of(r);
            count[c.index()] == p.block_len(c)
        });
        for &r in &hit {
            mark[r] = false;
            count[p.block_of(r).index()] = 0;
        }
        if !stable {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::tests::five_states;
    use crate::kripke::KripkeBuilder;

    #[test]
    fn running_example() {
        let ks = five_states();
        let pl = ks.label_partition();
        assert!(!is_pt_stable(&ks, &pl));
        let (out, stats) = pt_refine_with_stats(&ks, &pl);
        assert!(is_pt_stable(&ks, &out));
        assert!(out.refines(&pl));
        assert_eq!(stats.splits, out.num_blocks() - pl.num_blocks());
        assert_eq!(out.render(1), "{1 | 2 | 3 | 4 | 5}");
    }

    #[test]
    fn discrete_and_cycle() {
        let ks = five_states();
        let d = Partition::discrete(5);
        assert_eq!(pt_refine(&ks, &d), d);

        let mut b = KripkeBuilder::new(4);
        b.edges([(0, 1), (1, 2), (2, 3), (3, 0)]);
        let cycle = b.build().unwrap();
        assert_eq!(
            pt_refine(&cycle, &Partition::trivial(4)),
            Partition::trivial(4)
        );
    }
}
