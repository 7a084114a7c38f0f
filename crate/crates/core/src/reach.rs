//! Partition refinement for the language of atoms, boolean connectives and
//! `EF`, splitting by `EF(B)` of single blocks on the SCC condensation.

use crate::kripke::{KripkeStructure, SccDag};
use crate::partition::{BlockId, Partition};
use crate::stateset::StateId;

/// Components that reach one of `start` in the DAG, `start` included.
pub fn compute_ef_scc(dag: &SccDag, start: &[usize]) -> Vec<usize> {
    let mut marks = vec![false; dag.num_components()];
    ef_components(dag, start.iter().copied(), &mut marks)
}

/// Backward closure that leaves `marks` all false again.
fn ef_components<I: IntoIterator<Item = usize>>(
    dag: &SccDag,
    start: I,
    marks: &mut [bool],
) -> Vec<usize> {
    let mut result = Vec::new();
    for c in start {
        if !marks[c] {
            marks[c] = true;
            result.push(c);
        }
    }
    let mut i = 0;
    while i < result.len() {
        let c = result[i];
        i += 1;
        for &r in dag.dag_predecessors(c) {
            if !marks[r] {
                marks[r] = true;
                result.push(r);
            }
        }
    }
    for &c in &result {
        marks[c] = false;
    }
    result
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct EfOptions {
    /// Check after the scan that no block splits any other. Always on in
    /// debug builds.
    pub debug_sweep: bool,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct EfStats {
    pub initial_blocks: usize,
    /// Blocks whose `EF` image was used as a splitter.
    pub scanned: usize,
    /// Proper block splits performed.
    pub splits: usize,
}

/// Coarsest refinement of `p` in which `EF(B)` is a union of blocks for
/// every block `B`.
pub fn ef_refine(ks: &KripkeStructure, p: &Partition) -> Partition {
    ef_refine_with_stats(ks, p, EfOptions::default()).0
}

pub fn ef_refine_with_stats(
    ks: &KripkeStructure,
    p: &Partition,
    opts: EfOptions,
) -> (Partition, EfStats) {
    let dag = ks.scc_dag();
    let mut p = p.clone();
    let mut stats = EfStats {
        initial_blocks: p.num_blocks(),
        ..EfStats::default()
    };
    let mut comp_marks = vec![false; dag.num_components()];
    let mut set: Vec<StateId> = Vec::new();

    let mut cur = p.first();
    while let Some(b) = cur {
        stats.scanned += 1;
        ef_of_block(&dag, &p, b, &mut comp_marks, &mut set);
        let splits = p.split(set.iter().copied());
        p.clear_round();
        stats.splits += splits.len();
        // `b ⊆ EF(b)`, so `b` itself is never split and stays in place.
        for s in &splits {
            p.move_to_end(s.parent);
        }
        cur = p.next(b);
    }

    if cfg!(debug_assertions) || opts.debug_sweep {
        assert!(
            is_ef_stable(ks, &p),
            "EF refinement left an unstable partition"
        );
    }
    (p, stats)
}

fn ef_of_block(
    dag: &SccDag,
    p: &Partition,
    b: BlockId,
    comp_marks: &mut [bool],
    out: &mut Vec<StateId>,
) {
    out.clear();
    let start: Vec<usize> = p.states(b).iter().map(|&s| dag.component_of(s)).collect();
    for c in ef_components(dag, start, comp_marks) {
        out.extend_from_slice(dag.members(c));
    }
}

/// Whether `EF(B)` is a union of blocks for every block `B`.
pub fn is_ef_stable(ks: &KripkeStructure, p: &Partition) -> bool {
    p.blocks().all(|b| {
        let image = ks.ef(&p.block_set(b));
        p.blocks().all(|c| {
            let c = p.block_set(c);
            c.is_subset(&image) || c.is_disjoint(&image)
        })
    })
}
