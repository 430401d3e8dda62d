//! Regular forests with variables, represented as finite rooted graphs.
//!
//! A [`ForestGraph`] denotes the forest obtained by unravelling the graph from
//! its roots. Cycles give infinite branches; variables may only occur finitely
//! often, so no variable leaf may be reachable from a cycle.

mod bisim;
pub mod graph;
mod io;
mod ops;
mod term;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

pub use bisim::{bisimilar, same_forest};
pub use io::ForestFile;
pub use ops::{flatten, hsum, sing, substitute, NestedForest, NestedNode};
pub use term::{parse_forest_term, parse_unranked_term};

pub type NodeId = usize;

/// A ranked set of symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankedAlphabet {
    symbols: Vec<(String, usize)>,
    index: HashMap<String, usize>,
}

impl RankedAlphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<S: Into<String>>(
        pairs: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Self> {
        let mut alphabet = Self::new();
        for (name, arity) in pairs {
            alphabet.insert(name.into(), arity)?;
        }
        Ok(alphabet)
    }

    /// Every symbol gets arity 1, which is how unranked labels are embedded.
    pub fn unranked<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::from_pairs(names.into_iter().map(|n| (n, 1)))
    }

    pub fn insert(&mut self, name: String, arity: usize) -> Result<()> {
        if parse_variable(&name).is_some() {
            return Err(Error::Malformed(format!(
                "symbol `{name}` clashes with variable syntax"
            )));
        }
        match self.index.get(&name) {
            Some(&i) if self.symbols[i].1 == arity => Ok(()),
            Some(&i) => Err(Error::AlphabetMismatch {
                symbol: name,
                left: self.symbols[i].1,
                right: arity,
            }),
            None => {
                self.index.insert(name.clone(), self.symbols.len());
                self.symbols.push((name, arity));
                Ok(())
            }
        }
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.index.get(name).map(|&i| self.symbols[i].1)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Union of two alphabets; fails if a shared name has two arities.
    pub fn merge(&self, other: &RankedAlphabet) -> Result<RankedAlphabet> {
        let mut out = self.clone();
        for (name, arity) in &other.symbols {
            out.insert(name.clone(), *arity)?;
        }
        Ok(out)
    }
}

/// `x3` parses to variable 3.
pub fn parse_variable(s: &str) -> Option<usize> {
    let digits = s.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Sym(String),
    Var(usize),
}

impl Label {
    pub fn sym(name: impl Into<String>) -> Self {
        Label::Sym(name.into())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Label::Var(_))
    }

    pub fn parse(s: &str) -> Self {
        match parse_variable(s) {
            Some(i) => Label::Var(i),
            None => Label::Sym(s.to_string()),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Sym(s) => f.write_str(s),
            Label::Var(i) => write!(f, "x{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: Label,
    /// `(edge label, target)`; order within one edge label is significant.
    pub children: Vec<(usize, NodeId)>,
}

impl Node {
    pub fn new(label: Label) -> Self {
        Node {
            label,
            children: Vec::new(),
        }
    }

    pub fn with_children(label: Label, children: Vec<(usize, NodeId)>) -> Self {
        Node { label, children }
    }
}

/// Finite graph whose unravelling from `roots` is the denoted forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestGraph {
    alphabet: RankedAlphabet,
    nodes: Vec<Node>,
    roots: Vec<NodeId>,
    arity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RootIsVariable {
        node: NodeId,
    },
    EdgeLabelExceedsArity {
        node: NodeId,
        edge: usize,
        arity: usize,
    },
    VariableHasChildren {
        node: NodeId,
    },
    MissingVariable {
        index: usize,
    },
    VariableReachableFromCycle {
        node: NodeId,
    },
    UnknownSymbol {
        node: NodeId,
        symbol: String,
    },
    DanglingEdge {
        node: NodeId,
        target: NodeId,
    },
    DanglingRoot {
        root: NodeId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RootIsVariable { node } => write!(f, "root is a variable (node {node})"),
            Violation::EdgeLabelExceedsArity { node, edge, arity } => write!(
                f,
                "edge label exceeds arity (node {node}, edge label {edge}, arity {arity})"
            ),
            Violation::VariableHasChildren { node } => {
                write!(f, "variable has children (node {node})")
            }
            Violation::MissingVariable { index } => write!(f, "variable x{index} does not occur"),
            Violation::VariableReachableFromCycle { node } => {
                write!(f, "variable reachable from cycle (node {node})")
            }
            Violation::UnknownSymbol { node, symbol } => {
                write!(f, "unknown symbol `{symbol}` (node {node})")
            }
            Violation::DanglingEdge { node, target } => {
                write!(f, "edge from node {node} to missing node {target}")
            }
            Violation::DanglingRoot { root } => write!(f, "root {root} does not exist"),
        }
    }
}

impl ForestGraph {
    /// Builds a graph without validating it; the arity is one more than the
    /// largest variable index reachable from the roots.
    pub fn new(alphabet: RankedAlphabet, nodes: Vec<Node>, roots: Vec<NodeId>) -> Self {
        let mut g = ForestGraph {
            alphabet,
            nodes,
            roots,
            arity: 0,
        };
        g.arity = g.max_variable().map_or(0, |m| m + 1);
        g
    }

    pub fn empty(alphabet: RankedAlphabet) -> Self {
        ForestGraph::new(alphabet, Vec::new(), Vec::new())
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Result<&Node> {
        self.nodes.get(id).ok_or(Error::UnknownNode(id))
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn with_alphabet(mut self, alphabet: RankedAlphabet) -> Self {
        self.alphabet = alphabet;
        self
    }

    fn max_variable(&self) -> Option<usize> {
        self.reachable()
            .into_iter()
            .filter_map(|v| match self.nodes.get(v).map(|n| &n.label) {
                Some(Label::Var(i)) => Some(*i),
                _ => None,
            })
            .max()
    }

    /// Nodes reachable from the roots, in depth-first preorder.
    pub fn reachable(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack: Vec<NodeId> = self.roots.iter().rev().copied().collect();
        while let Some(v) = stack.pop() {
            if v >= self.nodes.len() || seen[v] {
                continue;
            }
            seen[v] = true;
            order.push(v);
            for &(_, c) in self.sorted_children(v).iter().rev() {
                stack.push(c);
            }
        }
        order
    }

    /// Children of `v` grouped by ascending edge label, stable within a label.
    pub fn sorted_children(&self, v: NodeId) -> Vec<(usize, NodeId)> {
        let mut cs = self.nodes[v].children.clone();
        cs.sort_by_key(|&(e, _)| e);
        cs
    }

    pub fn has_variables(&self) -> bool {
        self.reachable()
            .iter()
            .any(|&v| self.nodes[v].label.is_var())
    }

    pub fn is_acyclic(&self) -> bool {
        let adj = self.adjacency();
        let on_cycle = graph::on_cycle(&adj);
        self.reachable().iter().all(|&v| !on_cycle[v])
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<NodeId>> {
        self.nodes
            .iter()
            .map(|n| {
                n.children
                    .iter()
                    .map(|&(_, c)| c)
                    .filter(|&c| c < self.nodes.len())
                    .collect()
            })
            .collect()
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let n = self.nodes.len();
        for &r in &self.roots {
            if r >= n {
                out.push(Violation::DanglingRoot { root: r });
            } else if self.nodes[r].label.is_var() {
                out.push(Violation::RootIsVariable { node: r });
            }
        }
        for v in self.reachable() {
            let node = &self.nodes[v];
            let arity = match &node.label {
                Label::Var(_) => {
                    if !node.children.is_empty() {
                        out.push(Violation::VariableHasChildren { node: v });
                    }
                    0
                }
                Label::Sym(s) => match self.alphabet.arity(s) {
                    Some(a) => a,
                    None => {
                        out.push(Violation::UnknownSymbol {
                            node: v,
                            symbol: s.clone(),
                        });
                        usize::MAX
                    }
                },
            };
            for &(e, t) in &node.children {
                if t >= n {
                    out.push(Violation::DanglingEdge { node: v, target: t });
                }
                if e >= arity && !node.label.is_var() {
                    out.push(Violation::EdgeLabelExceedsArity {
                        node: v,
                        edge: e,
                        arity,
                    });
                }
            }
        }
        let reach = self.reachable();
        let present: BTreeSet<usize> = reach
            .iter()
            .filter_map(|&v| match self.nodes[v].label {
                Label::Var(i) => Some(i),
                _ => None,
            })
            .collect();
        for i in 0..self.arity {
            if !present.contains(&i) {
                out.push(Violation::MissingVariable { index: i });
            }
        }
        let adj = self.adjacency();
        let on_cycle = graph::on_cycle(&adj);
        let cyclic: Vec<NodeId> = reach.iter().copied().filter(|&v| on_cycle[v]).collect();
        let below = graph::reachable_from(&adj, &cyclic);
        for &v in &reach {
            if below[v] && self.nodes[v].label.is_var() {
                out.push(Violation::VariableReachableFromCycle { node: v });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(|vs| {
            Error::InvalidForest(
                vs.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })
    }

    /// Drops unreachable nodes and renumbers in depth-first preorder with
    /// children sorted by edge label. Two graphs with equal canonical forms
    /// are equal node-for-node.
    pub fn canonical(&self) -> ForestGraph {
        let order = self.reachable();
        let mut rename = vec![usize::MAX; self.nodes.len()];
        for (i, &v) in order.iter().enumerate() {
            rename[v] = i;
        }
        let nodes = order
            .iter()
            .map(|&v| {
                Node::with_children(
                    self.nodes[v].label.clone(),
                    self.sorted_children(v)
                        .into_iter()
                        .map(|(e, c)| (e, rename[c]))
                        .collect(),
                )
            })
            .collect();
        let roots = self.roots.iter().map(|&r| rename[r]).collect();
        ForestGraph {
            alphabet: self.alphabet.clone(),
            nodes,
            roots,
            arity: self.arity,
        }
    }

    /// Deterministic textual key of the canonical form (labels, edges, roots).
    pub fn canonical_key(&self) -> String {
        let c = self.canonical();
        let mut s = String::new();
        for (i, n) in c.nodes.iter().enumerate() {
            use fmt::Write;
            let _ = write!(s, "{i}:{}[", n.label);
            for (j, (e, t)) in n.children.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{e}>{t}");
            }
            s.push_str("];");
        }
        s.push('|');
        for (j, r) in c.roots.iter().enumerate() {
            if j > 0 {
                s.push(',');
            }
            s.push_str(&r.to_string());
        }
        s
    }

    /// Renumbers variables so that the occurring ones are `x0..x{m-1}`,
    /// preserving their relative order.
    pub fn compact_variables(mut self) -> ForestGraph {
        let reach = self.reachable();
        let present: BTreeSet<usize> = reach
            .iter()
            .filter_map(|&v| match self.nodes[v].label {
                Label::Var(i) => Some(i),
                _ => None,
            })
            .collect();
        let map: HashMap<usize, usize> = present.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for n in &mut self.nodes {
            if let Label::Var(i) = n.label {
                if let Some(&j) = map.get(&i) {
                    n.label = Label::Var(j);
                }
            }
        }
        self.arity = present.len();
        self
    }

    /// Re-rooted at `v`.
    pub fn subtree(&self, v: NodeId) -> Result<ForestGraph> {
        self.node(v)?;
        let g = ForestGraph::new(self.alphabet.clone(), self.nodes.clone(), vec![v]);
        Ok(g.canonical().compact_variables())
    }

    /// Forest of the children of `v`, grouped by ascending edge label.
    pub fn successor_forest(&self, v: NodeId) -> Result<ForestGraph> {
        self.node(v)?;
        let roots = self
            .sorted_children(v)
            .into_iter()
            .map(|(_, c)| c)
            .collect();
        let g = ForestGraph::new(self.alphabet.clone(), self.nodes.clone(), roots);
        Ok(g.canonical().compact_variables())
    }

    /// Same graph with every symbol renamed through `f`; the alphabet is
    /// replaced by `alphabet`.
    pub fn relabel(&self, alphabet: RankedAlphabet, f: impl Fn(&str) -> String) -> ForestGraph {
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let label = match &n.label {
                    Label::Sym(s) => Label::Sym(f(s)),
                    Label::Var(i) => Label::Var(*i),
                };
                Node::with_children(label, n.children.clone())
            })
            .collect();
        ForestGraph::new(alphabet, nodes, self.roots.clone())
    }

    /// Term notation for acyclic graphs, e.g. `a(b + c, 0, b) + b`.
    pub fn to_term(&self) -> Option<String> {
        if !self.is_acyclic() {
            return None;
        }
        Some(self.forest_term(&self.roots))
    }

    fn forest_term(&self, roots: &[NodeId]) -> String {
        if roots.is_empty() {
            return "0".to_string();
        }
        roots
            .iter()
            .map(|&r| self.tree_term(r))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn tree_term(&self, v: NodeId) -> String {
        let node = &self.nodes[v];
        let arity = match &node.label {
            Label::Sym(s) => self.alphabet.arity(s).unwrap_or(0),
            Label::Var(_) => 0,
        };
        let used = node.children.iter().map(|&(e, _)| e + 1).max().unwrap_or(0);
        if used == 0 {
            return node.label.to_string();
        }
        let args: Vec<String> = (0..arity.max(used))
            .map(|e| {
                let cs: Vec<NodeId> = node
                    .children
                    .iter()
                    .filter(|&&(l, _)| l == e)
                    .map(|&(_, c)| c)
                    .collect();
                self.forest_term(&cs)
            })
            .collect();
        format!("{}({})", node.label, args.join(", "))
    }
}

impl fmt::Display for ForestGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_term() {
            Some(t) => f.write_str(&t),
            None => f.write_str(&self.canonical_key()),
        }
    }
}
