#![allow(dead_code)]

pub use gpt_refine::random::random_instances as instances;
use gpt_refine::{KripkeStructure, Partition};

/// Plain adjacency view with its own set operators on `u32` masks.
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn of(ks: &KripkeStructure) -> Graph {
        Graph {
            n: ks.num_states(),
            edges: ks.transitions().collect(),
        }
    }

    pub fn full(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    pub fn pre(&self, s: u32) -> u32 {
        self.edges
            .iter()
            .filter(|&&(_, t)| s >> t & 1 == 1)
            .fold(0, |acc, &(a, _)| acc | 1 << a)
    }

    pub fn eu(&self, stay: u32, target: u32) -> u32 {
        let mut x = target;
        loop {
            let next = x | (stay & self.pre(x));
            if next == x {
                return x;
            }
            x = next;
        }
    }

    pub fn ef(&self, target: u32) -> u32 {
        self.eu(self.full(), target)
    }

    /// Mutual reachability via Floyd–Warshall.
    pub fn reach(&self) -> Vec<Vec<bool>> {
        let mut r = vec![vec![false; self.n]; self.n];
        for i in 0..self.n {
            r[i][i] = true;
        }
        for &(a, b) in &self.edges {
            r[a][b] = true;
        }
        for k in 0..self.n {
            for i in 0..self.n {
                for j in 0..self.n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }
}

pub fn mask_of(p: &Partition, b: gpt_refine::BlockId) -> u32 {
    p.states(b).iter().fold(0, |acc, &s| acc | 1 << s)
}

/// Blocks of the label partition and their complements, as masks.
pub fn atom_sets(ks: &KripkeStructure) -> Vec<u32> {
    let p = ks.label_partition();
    let full = Graph::of(ks).full();
    p.blocks()
        .flat_map(|b| {
            let m = mask_of(&p, b);
            [m, full & !m]
        })
        .collect()
}

/// Operators available when building formula denotations.
#[derive(Copy, Clone, PartialEq, Eq)]
pub enum Op {
    Not,
    Ex,
    Eu,
    Ef,
}

/// Partition induced by every formula over `atoms` built with `∧`, `true`
/// and `ops`: two states are equivalent iff no denotation separates them.
pub fn formula_partition(ks: &KripkeStructure, ops: &[Op]) -> Partition {
    let g = Graph::of(ks);
    let mut known: Vec<u32> = vec![g.full()];
    for a in atom_sets(ks) {
        if !known.contains(&a) {
            known.push(a);
        }
    }
    let mut seen: std::collections::HashSet<u32> = known.iter().copied().collect();
    let mut i = 0;
    while i < known.len() {
        let a = known[i];
        let mut out = Vec::new();
        for &b in &known[..=i] {
            out.push(a & b);
            if ops.contains(&Op::Eu) {
                out.push(g.eu(a, b));
                out.push(g.eu(b, a));
            }
        }
        for op in ops {
            match op {
                Op::Not => out.push(g.full() & !a),
                Op::Ex => out.push(g.pre(a)),
                Op::Ef => out.push(g.ef(a)),
                Op::Eu => {}
            }
        }
        for x in out {
            if seen.insert(x) {
                known.push(x);
            }
        }
        i += 1;
    }
    Partition::from_key(g.n, |s| {
        known.iter().map(|m| m >> s & 1).collect::<Vec<u32>>()
    })
}

/// Largest bisimulation from label equality, by pair elimination.
pub fn naive_bisimulation(ks: &KripkeStructure) -> Partition {
    let n = ks.num_states();
    let mut r: Vec<Vec<bool>> = (0..n)
        .map(|s| (0..n).map(|t| ks.labels(s) == ks.labels(t)).collect())
        .collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            for t in 0..n {
                if !r[s][t] {
                    continue;
                }
                let forth = ks
                    .successors(s)
                    .iter()
                    .all(|&a| ks.successors(t).iter().any(|&b| r[a][b]));
                let back = ks
                    .successors(t)
                    .iter()
                    .all(|&b| ks.successors(s).iter().any(|&a| r[a][b]));
                if !(forth && back) {
                    r[s][t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Partition::from_key(n, |s| r[s].clone())
}
