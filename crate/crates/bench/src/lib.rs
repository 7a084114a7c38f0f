//! Workloads for the refiner benchmarks.

use gpt_refine::kripke::{edge_to_node_labels, LabeledTs};
use gpt_refine::{KripkeBuilder, KripkeStructure};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `n` states with `degree` random successors each and `atoms` atoms, each
/// holding on roughly half the states.
pub fn random_structure(seed: u64, n: usize, degree: usize, atoms: usize) -> KripkeStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = KripkeBuilder::new(n);
    for a in 0..atoms {
        let name = format!("a{a}");
        b.atom(&name);
        for s in 0..n {
            if rng.gen_bool(0.5) {
                b.label(s, &name);
            }
        }
    }
    for s in 0..n {
        for _ in 0..degree.max(1) {
            b.edge(s, rng.gen_range(0..n));
        }
    }
    b.build().expect("states are in range")
}

/// An edge-labelled system with `actions` labels, converted the way `.aut`
/// inputs are.
pub fn random_lts(seed: u64, n: usize, edges: usize, actions: usize) -> KripkeStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut list = Vec::with_capacity(edges.max(n));
    for s in 0..n {
        list.push((
            s,
            format!("l{}", rng.gen_range(0..actions.max(1))),
            rng.gen_range(0..n),
        ));
    }
    while list.len() < edges {
        let label = format!("l{}", rng.gen_range(0..actions.max(1)));
        list.push((rng.gen_range(0..n), label, rng.gen_range(0..n)));
    }
    edge_to_node_labels(&LabeledTs {
        num_states: n,
        initial: 0,
        edges: list,
    })
}
