//! Exhaustive oracles: runs of automata on finite forests, and values of
//! small marked generator forests.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::AlgebraPresentation;
use crate::error::{Error, Result};
use crate::forest::{ForestGraph, Label, Node, NodeId};
use crate::parity::{Nfa, ParityForestAutomaton};

/// Whether some word with letter `i` drawn from `choices[i]` is accepted,
/// trying every word.
fn some_word(nfa: &Nfa, choices: &[Vec<usize>]) -> bool {
    if choices.iter().any(Vec::is_empty) {
        return false;
    }
    let mut idx = vec![0; choices.len()];
    loop {
        let word: Vec<usize> = idx
            .iter()
            .enumerate()
            .map(|(i, &j)| choices[i][j])
            .collect();
        if nfa.accepts(&word) {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Acceptance of a finite forest by enumerating state assignments.
pub fn brute_accepts(aut: &ParityForestAutomaton, g: &ForestGraph) -> Result<bool> {
    if !g.is_acyclic() {
        return Err(Error::Cyclic);
    }
    fn states(
        aut: &ParityForestAutomaton,
        g: &ForestGraph,
        v: NodeId,
        memo: &mut HashMap<NodeId, Vec<usize>>,
    ) -> Vec<usize> {
        if let Some(s) = memo.get(&v) {
            return s.clone();
        }
        let node = &g.nodes()[v];
        let mut by_edge: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
        for &(e, c) in &node.children {
            let s = states(aut, g, c, memo);
            by_edge.entry(e).or_default().push(s);
        }
        let out: Vec<usize> = (0..aut.states.len())
            .filter(|&q| {
                aut.items(q, &node.label).iter().any(|item| {
                    by_edge.keys().all(|e| item.constraint(*e).is_some())
                        && item.children.iter().all(|(e, nfa)| {
                            some_word(nfa, by_edge.get(e).map_or(&[][..], Vec::as_slice))
                        })
                })
            })
            .collect();
        memo.insert(v, out.clone());
        out
    }
    let mut memo = HashMap::new();
    let roots: Vec<Vec<usize>> = g
        .roots()
        .iter()
        .map(|&r| states(aut, g, r, &mut memo))
        .collect();
    Ok(some_word(&aut.root, &roots))
}

enum Gen {
    Leaf(usize),
    Mark,
    /// An arity-1 generator over the forest with the given id.
    Unary(usize, usize),
}

/// All ordered generator forests with at most `size` nodes, bottom-up:
/// trees and forests are stored once and referenced by id.
struct Universe {
    trees: Vec<Gen>,
    forests: Vec<Vec<usize>>,
    /// Forest ids by node count.
    by_size: Vec<Vec<usize>>,
}

impl Universe {
    fn new(size: usize, n0: usize, n1: usize) -> Self {
        let mut u = Universe {
            trees: Vec::new(),
            forests: vec![Vec::new()],
            by_size: vec![vec![0]],
        };
        let mut trees_by_size: Vec<Vec<usize>> = vec![Vec::new()];
        for n in 1..=size {
            let mut ts = Vec::new();
            if n == 1 {
                for i in 0..n0 {
                    u.trees.push(Gen::Leaf(i));
                    ts.push(u.trees.len() - 1);
                }
                u.trees.push(Gen::Mark);
                ts.push(u.trees.len() - 1);
            }
            for a in 0..n1 {
                for &f in &u.by_size[n - 1] {
                    u.trees.push(Gen::Unary(a, f));
                    ts.push(u.trees.len() - 1);
                }
            }
            trees_by_size.push(ts);
            let mut fs = Vec::new();
            for first in 1..=n {
                for &t in &trees_by_size[first] {
                    for &rest in &u.by_size[n - first] {
                        let mut f = vec![t];
                        f.extend_from_slice(&u.forests[rest]);
                        u.forests.push(f);
                        fs.push(u.forests.len() - 1);
                    }
                }
            }
            u.by_size.push(fs);
        }
        u
    }

    /// Builds the nodes of tree `t`; returns its root and counts marks.
    fn build(&self, t: usize, nodes: &mut Vec<Node>, marks: &mut usize, names: &Names) -> NodeId {
        let id = nodes.len();
        match self.trees[t] {
            Gen::Leaf(i) => nodes.push(Node::new(Label::sym(names.g0[i].clone()))),
            Gen::Mark => {
                *marks += 1;
                nodes.push(Node::new(Label::sym(names.mark.clone())));
            }
            Gen::Unary(a, f) => {
                nodes.push(Node::new(Label::sym(names.g1[a].clone())));
                for &s in &self.forests[f] {
                    let c = self.build(s, nodes, marks, names);
                    nodes[id].children.push((0, c));
                }
            }
        }
        id
    }
}

struct Names {
    g0: Vec<String>,
    g1: Vec<String>,
    mark: String,
}

/// `(d, i, r)` for every forest over arity-0 and arity-1 generators plus a
/// mark leaf with at most `size` nodes: `d` is its value with marks read as
/// `c`, `i` the number of marks capped at `cap`, `r` whether a root is a mark.
/// Indices refer to the arity-0 element list.
pub fn brute_marked(
    pres: &AlgebraPresentation,
    c: usize,
    cap: usize,
    size: usize,
) -> Result<BTreeSet<(usize, usize, bool)>> {
    let a0 = pres.elements(0)?.to_vec();
    let gens = pres.generators();
    let of_arity = |n: usize| -> Vec<String> {
        gens.iter()
            .filter(|g| pres.arity_of(g) == Some(n))
            .cloned()
            .collect()
    };
    let names = Names {
        g0: of_arity(0),
        g1: of_arity(1),
        mark: a0[c].clone(),
    };
    let u = Universe::new(size, names.g0.len(), names.g1.len());
    let mut out = BTreeSet::new();
    for ids in &u.by_size {
        for &f in ids {
            let mut nodes = Vec::new();
            let mut marks = 0;
            let roots: Vec<NodeId> = u.forests[f]
                .iter()
                .map(|&t| u.build(t, &mut nodes, &mut marks, &names))
                .collect();
            let root_mark = u.forests[f]
                .iter()
                .any(|&t| matches!(u.trees[t], Gen::Mark));
            let g = ForestGraph::new(pres.alphabet().clone(), nodes, roots);
            let d = pres.evaluate(&g, 0)?;
            let d = a0.iter().position(|x| *x == d).expect("listed element");
            out.insert((d, marks.min(cap), root_mark));
        }
    }
    Ok(out)
}
