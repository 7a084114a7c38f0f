//! Seeded random Kripke structures for property tests and oracle checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kripke::{KripkeBuilder, KripkeStructure};

/// Shape of generated structures.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub min_states: usize,
    pub max_states: usize,
    pub max_edges: usize,
    pub max_atoms: usize,
    /// Give every state at least one successor.
    pub total: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            min_states: 3,
            max_states: 8,
            max_edges: 20,
            max_atoms: 3,
            total: true,
        }
    }
}

const ATOM_NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

/// A structure with `min_states..=max_states` states and at most
/// `max_edges` distinct transitions (at least one per state when `total`,
/// which may need up to `max_states` of them).
pub fn random_kripke<R: Rng + ?Sized>(rng: &mut R, params: &RandomParams) -> KripkeStructure {
    let n = rng.gen_range(params.min_states..=params.max_states.max(params.min_states));
    let mut b = KripkeBuilder::new(n);
    let atoms = rng.gen_range(0..=params.max_atoms.min(ATOM_NAMES.len()));
    for name in &ATOM_NAMES[..atoms] {
        b.atom(name);
        for s in 0..n {
            if rng.gen_bool(0.5) {
                b.label(s, name);
            }
        }
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    if params.total {
        for s in 0..n {
            edges.push((s, rng.gen_range(0..n)));
        }
    }
    let budget = params.max_edges.max(edges.len());
    let extra = rng.gen_range(0..=budget - edges.len());
    for _ in 0..extra {
        let e = (rng.gen_range(0..n), rng.gen_range(0..n));
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    edges.shuffle(rng);
    b.edges(edges);
    b.build().expect("generated states are in range")
}

/// `count` structures drawn from one seeded stream.
pub fn random_instances(seed: u64, count: usize, params: &RandomParams) -> Vec<KripkeStructure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_kripke(&mut rng, params))
        .collect()
}
