//! Exhaustive enumeration of small finite forests over an unranked alphabet.

use crate::forest::{ForestGraph, Label, Node, RankedAlphabet};

/// A finite tree with labels given as indices into a symbol list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    pub label: usize,
    pub children: Vec<Tree>,
}

impl Tree {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }
}

/// Caps the size of enumerated objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_nodes: usize,
    /// Treat sibling order as irrelevant (one representative per multiset).
    pub unordered: bool,
}

struct Enumerator {
    labels: usize,
    unordered: bool,
    trees: Vec<Vec<Tree>>,
    forests: Vec<Vec<Vec<Tree>>>,
}

impl Enumerator {
    fn new(labels: usize, unordered: bool) -> Self {
        Enumerator {
            labels,
            unordered,
            trees: vec![Vec::new()],
            forests: vec![vec![Vec::new()]],
        }
    }

    /// Fills tables up to size `n`.
    fn grow(&mut self, n: usize) {
        while self.trees.len() <= n {
            let s = self.trees.len();
            let mut ts = Vec::new();
            for f in &self.forests[s - 1] {
                for l in 0..self.labels {
                    ts.push(Tree {
                        label: l,
                        children: f.clone(),
                    });
                }
            }
            ts.sort();
            self.trees.push(ts);
            let mut fs = Vec::new();
            for first in 1..=s {
                for t in &self.trees[first] {
                    for rest in &self.forests[s - first] {
                        if self.unordered && rest.first().is_some_and(|r| r < t) {
                            continue;
                        }
                        let mut f = vec![t.clone()];
                        f.extend(rest.iter().cloned());
                        fs.push(f);
                    }
                }
            }
            self.forests.push(fs);
        }
    }
}

/// All forests with at most `budget.max_nodes` nodes, smallest first.
pub fn enum_trees_forests(labels: usize, budget: EnumerationBudget) -> Vec<Vec<Tree>> {
    let mut e = Enumerator::new(labels, budget.unordered);
    e.grow(budget.max_nodes);
    e.forests.into_iter().flatten().collect()
}

/// Converts a forest of index trees to a graph, with `hole` (if any)
/// becoming the variable `x0`.
pub fn to_graph(
    forest: &[Tree],
    symbols: &[String],
    alphabet: &RankedAlphabet,
    hole: Option<usize>,
) -> ForestGraph {
    fn go(t: &Tree, symbols: &[String], hole: Option<usize>, nodes: &mut Vec<Node>) -> usize {
        let id = nodes.len();
        let label = if Some(t.label) == hole {
            Label::Var(0)
        } else {
            Label::Sym(symbols[t.label].clone())
        };
        nodes.push(Node::new(label));
        let cs: Vec<(usize, usize)> = t
            .children
            .iter()
            .map(|c| (0, go(c, symbols, hole, nodes)))
            .collect();
        nodes[id].children = cs;
        id
    }
    let mut nodes = Vec::new();
    let roots = forest
        .iter()
        .map(|t| go(t, symbols, hole, &mut nodes))
        .collect();
    ForestGraph::new(alphabet.clone(), nodes, roots)
}

/// All finite forests over `symbols` (unranked) with at most `budget`
/// nodes, as graphs.
pub fn enum_forests(symbols: &[String], budget: EnumerationBudget) -> Vec<ForestGraph> {
    let alphabet = RankedAlphabet::unranked(symbols.iter().cloned()).expect("distinct symbols");
    enum_trees_forests(symbols.len(), budget)
        .iter()
        .map(|f| to_graph(f, symbols, &alphabet, None))
        .collect()
}

fn holes(f: &[Tree], hole: usize) -> (usize, bool) {
    let mut count = 0;
    let mut inner = false;
    let mut stack: Vec<&Tree> = f.iter().collect();
    while let Some(t) = stack.pop() {
        if t.label == hole {
            count += 1;
            inner |= !t.children.is_empty();
        }
        stack.extend(t.children.iter());
    }
    (count, inner)
}

/// All contexts: forests with at most `max_nodes` nodes (the hole counts
/// as one) in which the hole `x0` occurs exactly once, as a leaf.
pub fn enum_contexts(symbols: &[String], max_nodes: usize) -> Vec<ForestGraph> {
    let alphabet = RankedAlphabet::unranked(symbols.iter().cloned()).expect("distinct symbols");
    let hole = symbols.len();
    let budget = EnumerationBudget {
        max_nodes,
        unordered: false,
    };
    enum_trees_forests(symbols.len() + 1, budget)
        .iter()
        .filter(|f| holes(f, hole) == (1, false))
        .map(|f| to_graph(f, symbols, &alphabet, Some(hole)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn ordered_counts() {
        // forests of size 0..=5 over two letters: 1, 2, 8, 40, 224, 1344
        let b = EnumerationBudget {
            max_nodes: 5,
            unordered: false,
        };
        let fs = enum_trees_forests(2, b);
        let mut by_size = [0usize; 6];
        for f in &fs {
            by_size[f.iter().map(Tree::size).sum::<usize>()] += 1;
        }
        assert_eq!(by_size, [1, 2, 8, 40, 224, 1344]);
    }

    #[test]
    fn unordered_are_distinct_up_to_sibling_order() {
        let fs = enum_forests(
            &ab(),
            EnumerationBudget {
                max_nodes: 4,
                unordered: true,
            },
        );
        let mut keys: Vec<String> = fs.iter().map(crate::testkit::unordered_key).collect();
        let n = keys.len();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), n);
        // one letter, size 3: a(a(a)), a(a + a), a + a(a), a + a + a
        let one = enum_trees_forests(
            1,
            EnumerationBudget {
                max_nodes: 3,
                unordered: true,
            },
        );
        assert_eq!(
            one.iter()
                .filter(|f| f.iter().map(Tree::size).sum::<usize>() == 3)
                .count(),
            4
        );
    }

    #[test]
    fn contexts_have_one_hole() {
        let cs = enum_contexts(&ab(), 2);
        // x0, x0 + a, x0 + b, a + x0, b + x0, a(x0), b(x0)
        assert_eq!(cs.len(), 7);
        assert!(cs.iter().all(|c| c.arity() == 1));
    }
}
