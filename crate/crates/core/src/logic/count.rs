//! Capped counting of unravelling vertices.

use crate::forest::graph;

/// Precomputed cycle structure of a graph.
pub(crate) struct CountGraph {
    adj: Vec<Vec<usize>>,
    on_cycle: Vec<bool>,
    /// Strongly connected components, sinks first.
    order: Vec<usize>,
}

impl CountGraph {
    pub(crate) fn new(adj: Vec<Vec<usize>>) -> Self {
        let on_cycle = graph::on_cycle(&adj);
        let order = graph::scc(&adj).into_iter().flatten().collect();
        CountGraph {
            adj,
            on_cycle,
            order,
        }
    }

    /// For every node `v`, the number of paths (length ≥ 0, edges counted
    /// with multiplicity) from `v` to a target, capped at `cap`. Such a path
    /// through a cycle yields infinitely many unravelling vertices, hence
    /// `cap`.
    pub(crate) fn paths_to(&self, targets: &[bool], cap: usize) -> Vec<usize> {
        let n = self.adj.len();
        let reach = graph::can_reach(&self.adj, targets);
        let pumped: Vec<bool> = (0..n).map(|v| self.on_cycle[v] && reach[v]).collect();
        let infinite = graph::can_reach(&self.adj, &pumped);
        let mut count = vec![0usize; n];
        for &v in &self.order {
            if infinite[v] {
                count[v] = cap;
            } else if !self.on_cycle[v] {
                let mut c = usize::from(targets[v]);
                for &w in &self.adj[v] {
                    c = (c + count[w]).min(cap);
                }
                count[v] = c.min(cap);
            }
        }
        count
    }

    /// Sum of `per_node` over the children of `v`, capped.
    pub(crate) fn sum_children(&self, v: usize, per_node: &[usize], cap: usize) -> usize {
        self.adj[v]
            .iter()
            .fold(0, |acc, &w| (acc + per_node[w]).min(cap))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact path count on a DAG by naive recursion.
    fn exact(adj: &[Vec<usize>], t: &[bool], v: usize) -> usize {
        usize::from(t[v]) + adj[v].iter().map(|&w| exact(adj, t, w)).sum::<usize>()
    }

    #[test]
    fn capped_matches_exact_on_dags() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(1..=12);
            let adj: Vec<Vec<usize>> = (0..n)
                .map(|v| {
                    let fanout = rng.gen_range(0..3);
                    if v + 1 == n {
                        return Vec::new();
                    }
                    (0..fanout).map(|_| rng.gen_range(v + 1..n)).collect()
                })
                .collect();
            let t: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
            let cap = rng.gen_range(1..6);
            let cg = CountGraph::new(adj.clone());
            let got = cg.paths_to(&t, cap);
            for v in 0..n {
                assert_eq!(got[v], exact(&adj, &t, v).min(cap));
            }
        }
    }

    #[test]
    fn loops_saturate() {
        // 0 -> 1, 1 -> 1 (self-loop), 1 -> 2 ; target 2
        let cg = CountGraph::new(vec![vec![1], vec![1, 2], vec![]]);
        assert_eq!(cg.paths_to(&[false, false, true], 7), vec![7, 7, 1]);
        // the loop does not reach the target
        let cg = CountGraph::new(vec![vec![1, 2], vec![1], vec![]]);
        assert_eq!(cg.paths_to(&[false, false, true], 7), vec![1, 0, 1]);
    }
}
