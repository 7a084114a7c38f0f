//! Strongly connected components and their condensation.

use super::KripkeStructure;
use crate::stateset::StateId;

/// Condensation of `(Σ, →)`: the DAG of strongly connected components.
///
/// Components are numbered in the order Tarjan's algorithm completes them,
/// which is a reverse topological order (a component's DAG successors have
/// smaller indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDag {
    component_of: Vec<usize>,
    members: Vec<Vec<StateId>>,
    dag_forward: Vec<Vec<usize>>,
    dag_backward: Vec<Vec<usize>>,
}

const UNVISITED: usize = usize::MAX;

impl SccDag {
    /// Iterative Tarjan, linear in `|Σ| + |→|`.
    pub fn new(ks: &KripkeStructure) -> SccDag {
        let n = ks.num_states();
        let mut index = vec![UNVISITED; n];
        let mut lowlink = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut component_of = vec![UNVISITED; n];
        let mut members: Vec<Vec<StateId>> = Vec::new();
        let mut next_index = 0;
        // (state, position in its successor list)
        let mut call: Vec<(StateId, usize)> = Vec::new();

        for root in 0..n {
            if index[root] != UNVISITED {
                continue;
            }
            call.push((root, 0));
            index[root] = next_index;
            lowlink[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                let succ = ks.successors(v);
                if let Some(&w) = succ.get(*pos) {
                    *pos += 1;
                    if index[w] == UNVISITED {
                        index[w] = next_index;
                        lowlink[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        lowlink[v] = lowlink[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    let c = members.len();
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("Tarjan stack holds v");
                        on_stack[w] = false;
                        component_of[w] = c;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    members.push(comp);
                }
            }
        }

        let k = members.len();
        let mut dag_forward = vec![Vec::new(); k];
        let mut dag_backward = vec![Vec::new(); k];
        for (a, b) in ks.transitions() {
            let (ca, cb) = (component_of[a], component_of[b]);
            if ca != cb {
                dag_forward[ca].push(cb);
                dag_backward[cb].push(ca);
            }
        }
        for adj in dag_forward.iter_mut().chain(dag_backward.iter_mut()) {
            adj.sort_unstable();
            adj.dedup();
        }
        SccDag {
            component_of,
            members,
            dag_forward,
            dag_backward,
        }
    }

    pub fn num_components(&self) -> usize {
        self.members.len()
    }

    pub fn component_of(&self, s: StateId) -> usize {
        self.component_of[s]
    }

    pub fn members(&self, c: usize) -> &[StateId] {
        &self.members[c]
    }

    pub fn dag_successors(&self, c: usize) -> &[usize] {
        &self.dag_forward[c]
    }

    pub fn dag_predecessors(&self, c: usize) -> &[usize] {
        &self.dag_backward[c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::tests::chain4;
    use crate::kripke::KripkeBuilder;
    use rand::{Rng, SeedableRng};

    fn reachability(ks: &KripkeStructure) -> Vec<Vec<bool>> {
        let n = ks.num_states();
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in ks.transitions() {
            r[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }

    #[test]
    fn chain_condensation() {
        let dag = chain4().scc_dag();
        assert_eq!(dag.num_components(), 4);
        for s in 0..3 {
            let (c, d) = (dag.component_of(s), dag.component_of(s + 1));
            assert_eq!(dag.dag_successors(c), &[d]);
        }
        assert!(dag.dag_successors(dag.component_of(3)).is_empty());
    }

    #[test]
    fn self_loop_and_cycle() {
        let mut b = KripkeBuilder::new(1);
        b.edge(0, 0);
        let dag = b.build().unwrap().scc_dag();
        assert_eq!(dag.num_components(), 1);
        assert!(dag.dag_successors(0).is_empty());

        let mut b = KripkeBuilder::new(3);
        b.edges([(0, 1), (1, 2), (2, 0)]);
        let dag = b.build().unwrap().scc_dag();
        assert_eq!(dag.num_components(), 1);
        assert_eq!(dag.members(0), &[0, 1, 2]);
    }

    #[test]
    fn agrees_with_floyd_warshall() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let n = rng.gen_range(1..=8);
            let mut b = KripkeBuilder::new(n);
            for _ in 0..rng.gen_range(0..=3 * n) {
                b.edge(rng.gen_range(0..n), rng.gen_range(0..n));
            }
            let ks = b.build().unwrap();
            let dag = ks.scc_dag();
            let r = reachability(&ks);
            for x in 0..n {
                for y in 0..n {
                    let same = dag.component_of(x) == dag.component_of(y);
                    assert_eq!(same, r[x][y] && r[y][x]);
                }
            }
            let mut seen = vec![false; dag.num_components()];
            for s in 0..n {
                seen[dag.component_of(s)] = true;
            }
            assert!(seen.iter().all(|&v| v));
            for c in 0..dag.num_components() {
                for &d in dag.dag_successors(c) {
                    assert!(d < c, "completion order is reverse topological");
                    assert!(dag.dag_predecessors(d).contains(&c));
                }
            }
        }
    }
}
