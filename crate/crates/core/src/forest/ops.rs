use std::collections::HashMap;

use super::{ForestGraph, Label, Node, NodeId, RankedAlphabet};
use crate::error::{Error, Result};

/// Disjoint union `s + t`; roots of `t` follow those of `s`.
pub fn hsum(s: &ForestGraph, t: &ForestGraph) -> Result<ForestGraph> {
    let alphabet = s.alphabet().merge(t.alphabet())?;
    let offset = s.len();
    let mut nodes = s.nodes().to_vec();
    nodes.extend(t.nodes().iter().map(|n| shift(n, offset)));
    let mut roots = s.roots().to_vec();
    roots.extend(t.roots().iter().map(|&r| r + offset));
    Ok(ForestGraph::new(alphabet, nodes, roots).canonical())
}

fn shift(n: &Node, offset: usize) -> Node {
    Node::with_children(
        n.label.clone(),
        n.children.iter().map(|&(e, c)| (e, c + offset)).collect(),
    )
}

/// Replaces every `x{i}` leaf of `s` by the forest `t`: each edge into an
/// `x{i}` node is redirected to every root of `t`, in order. Remaining
/// variables are renumbered densely.
pub fn substitute(s: &ForestGraph, i: usize, t: &ForestGraph) -> Result<ForestGraph> {
    if i >= s.arity() {
        return Err(Error::VariableOutOfRange {
            index: i,
            arity: s.arity(),
        });
    }
    let alphabet = s.alphabet().merge(t.alphabet())?;
    let offset = s.len();
    let t_roots: Vec<NodeId> = t.roots().iter().map(|&r| r + offset).collect();
    let is_target = |v: NodeId| s.nodes()[v].label == Label::Var(i);
    let mut nodes: Vec<Node> = s
        .nodes()
        .iter()
        .map(|n| {
            let mut children = Vec::with_capacity(n.children.len());
            for &(e, c) in &n.children {
                if is_target(c) {
                    children.extend(t_roots.iter().map(|&r| (e, r)));
                } else {
                    children.push((e, c));
                }
            }
            Node::with_children(n.label.clone(), children)
        })
        .collect();
    nodes.extend(t.nodes().iter().map(|n| shift(n, offset)));
    let mut roots = Vec::new();
    for &r in s.roots() {
        if is_target(r) {
            roots.extend(t_roots.iter().copied());
        } else {
            roots.push(r);
        }
    }
    Ok(ForestGraph::new(alphabet, nodes, roots)
        .canonical()
        .compact_variables())
}

/// `a(x0, ..., x{m-1})` for a symbol of arity `m`.
pub fn sing(alphabet: &RankedAlphabet, symbol: &str) -> Result<ForestGraph> {
    let arity = alphabet
        .arity(symbol)
        .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
    let mut nodes = vec![Node::with_children(
        Label::sym(symbol),
        (0..arity).map(|i| (i, i + 1)).collect(),
    )];
    nodes.extend((0..arity).map(|i| Node::new(Label::Var(i))));
    Ok(ForestGraph::new(alphabet.clone(), nodes, vec![0]))
}

/// A finite forest whose vertices are labelled by forests (or by outer
/// variables).
#[derive(Debug, Clone)]
pub struct NestedForest {
    pub nodes: Vec<NestedNode>,
    pub roots: Vec<NodeId>,
}

#[derive(Debug, Clone)]
pub enum NestedNode {
    Forest {
        label: ForestGraph,
        children: Vec<(usize, NodeId)>,
    },
    Var(usize),
}

/// Assembles a nested forest into one forest: every `x{k}` in the label of
/// `v` is replaced by the disjoint union of the flattened `k`-successors of
/// `v`. Only finite nestings are supported.
pub fn flatten(nested: &NestedForest) -> Result<ForestGraph> {
    let n = nested.nodes.len();
    let adj: Vec<Vec<usize>> = nested
        .nodes
        .iter()
        .map(|nd| match nd {
            NestedNode::Forest { children, .. } => children.iter().map(|&(_, c)| c).collect(),
            NestedNode::Var(_) => Vec::new(),
        })
        .collect();
    for (v, cs) in adj.iter().enumerate() {
        if let Some(&c) = cs.iter().find(|&&c| c >= n) {
            return Err(Error::Malformed(format!(
                "nested node {v} points to missing node {c}"
            )));
        }
    }
    if super::graph::on_cycle(&adj).iter().any(|&b| b) {
        return Err(Error::Cyclic);
    }
    let mut alphabet = RankedAlphabet::new();
    for (v, nd) in nested.nodes.iter().enumerate() {
        if let NestedNode::Forest { label, children } = nd {
            alphabet = alphabet.merge(label.alphabet())?;
            for &(e, _) in children {
                if e >= label.arity() {
                    return Err(Error::LabelArity {
                        node: v,
                        edge: e,
                        arity: label.arity(),
                    });
                }
            }
        }
    }
    let mut builder = Flattener {
        nested,
        out: Vec::new(),
        memo: HashMap::new(),
    };
    let mut roots = Vec::new();
    for &r in &nested.roots {
        roots.extend(builder.roots_of(r));
    }
    Ok(ForestGraph::new(alphabet, builder.out, roots).canonical())
}

struct Flattener<'a> {
    nested: &'a NestedForest,
    out: Vec<Node>,
    memo: HashMap<NodeId, Vec<NodeId>>,
}

impl Flattener<'_> {
    /// Output roots of the flattened subtree at nested node `v`.
    fn roots_of(&mut self, v: NodeId) -> Vec<NodeId> {
        if let Some(r) = self.memo.get(&v) {
            return r.clone();
        }
        let result = match &self.nested.nodes[v] {
            NestedNode::Var(i) => {
                self.out.push(Node::new(Label::Var(*i)));
                vec![self.out.len() - 1]
            }
            NestedNode::Forest { label, children } => {
                let mut by_var: Vec<Vec<NodeId>> = vec![Vec::new(); label.arity()];
                let mut sorted = children.clone();
                sorted.sort_by_key(|&(e, _)| e);
                for (e, c) in sorted {
                    let rs = self.roots_of(c);
                    by_var[e].extend(rs);
                }
                // copy the label graph, splicing successor roots in for variables
                let base = self.out.len();
                let ln = label.nodes();
                let mut map = vec![usize::MAX; ln.len()];
                for (j, node) in ln.iter().enumerate() {
                    if !node.label.is_var() {
                        map[j] = base + self.count_before(ln, j);
                    }
                }
                let copies: Vec<Node> = ln
                    .iter()
                    .filter(|nd| !nd.label.is_var())
                    .map(|nd| {
                        let mut cs = Vec::new();
                        for &(e, c) in &nd.children {
                            match ln[c].label {
                                Label::Var(k) => cs.extend(by_var[k].iter().map(|&r| (e, r))),
                                Label::Sym(_) => cs.push((e, map[c])),
                            }
                        }
                        Node::with_children(nd.label.clone(), cs)
                    })
                    .collect();
                self.out.extend(copies);
                label.roots().iter().map(|&r| map[r]).collect()
            }
        };
        self.memo.insert(v, result.clone());
        result
    }

    fn count_before(&self, ln: &[Node], j: usize) -> usize {
        ln[..j].iter().filter(|n| !n.label.is_var()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_forest_term;
    use super::*;

    fn alpha() -> RankedAlphabet {
        RankedAlphabet::from_pairs([("a", 1), ("b", 0), ("c", 0), ("f", 2)]).unwrap()
    }

    fn term(s: &str) -> ForestGraph {
        parse_forest_term(s, Some(&alpha())).unwrap()
    }

    #[test]
    fn hsum_with_empty_and_pairs() {
        let e = ForestGraph::empty(alpha());
        let s = term("a(b)");
        assert_eq!(hsum(&e, &s).unwrap().canonical_key(), s.canonical_key());
        assert_eq!(
            hsum(&term("a"), &term("b")).unwrap().to_term().unwrap(),
            "a + b"
        );
    }

    #[test]
    fn hsum_conflicting_alphabet() {
        let other = RankedAlphabet::from_pairs([("a", 2)]).unwrap();
        let t = parse_forest_term("a", Some(&other)).unwrap();
        assert!(matches!(
            hsum(&term("a"), &t),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn substitution_examples() {
        let s = term("a(x0)");
        assert_eq!(
            substitute(&s, 0, &term("b")).unwrap().to_term().unwrap(),
            "a(b)"
        );
        assert_eq!(
            substitute(&s, 0, &term("b + c"))
                .unwrap()
                .to_term()
                .unwrap(),
            "a(b + c)"
        );
        let s2 = term("a(x0 + x0)");
        assert_eq!(
            substitute(&s2, 0, &term("b")).unwrap().to_term().unwrap(),
            "a(b + b)"
        );
        assert!(matches!(
            substitute(&s, 1, &term("b")),
            Err(Error::VariableOutOfRange { .. })
        ));
    }

    #[test]
    fn sing_shapes() {
        assert_eq!(sing(&alpha(), "c").unwrap().to_term().unwrap(), "c");
        assert_eq!(sing(&alpha(), "a").unwrap().to_term().unwrap(), "a(x0)");
        assert_eq!(sing(&alpha(), "f").unwrap().to_term().unwrap(), "f(x0, x1)");
        assert!(sing(&alpha(), "q").is_err());
    }

    #[test]
    fn flatten_single_substitution() {
        let nested = NestedForest {
            nodes: vec![
                NestedNode::Forest {
                    label: term("a(x0)"),
                    children: vec![(0, 1)],
                },
                NestedNode::Forest {
                    label: term("b"),
                    children: vec![],
                },
            ],
            roots: vec![0],
        };
        assert_eq!(flatten(&nested).unwrap().to_term().unwrap(), "a(b)");
    }

    #[test]
    fn flatten_rejects_bad_edge() {
        let nested = NestedForest {
            nodes: vec![
                NestedNode::Forest {
                    label: term("a(x0)"),
                    children: vec![(1, 1)],
                },
                NestedNode::Forest {
                    label: term("b"),
                    children: vec![],
                },
            ],
            roots: vec![0],
        };
        assert!(matches!(flatten(&nested), Err(Error::LabelArity { .. })));
    }

    #[test]
    fn flatten_drops_unfilled_variable() {
        let nested = NestedForest {
            nodes: vec![NestedNode::Forest {
                label: term("f(x0, x1)"),
                children: vec![],
            }],
            roots: vec![0],
        };
        assert_eq!(flatten(&nested).unwrap().to_term().unwrap(), "f");
    }
}
