//! Counting types of regular forests and the formulas describing them.
//!
//! A tree type of rank `m+1` is a label together with, for each tree type
//! `σ` of rank `m`, the number of strict descendants of type `σ` capped at
//! `k`. Forest types count all vertices, roots included.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;

use super::count::CountGraph;
use super::formula::Formula;
use crate::error::{Error, Result};
use crate::forest::{ForestGraph, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeId(u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeKey {
    /// Rank-0 tree type: the root label.
    Leaf(String),
    Tree {
        rank: usize,
        label: String,
        theta: Vec<(TypeId, usize)>,
    },
    Forest {
        rank: usize,
        theta: Vec<(TypeId, usize)>,
    },
    /// The single forest type of rank 0.
    AnyForest,
}

impl TypeKey {
    pub fn rank(&self) -> usize {
        match self {
            TypeKey::Leaf(_) | TypeKey::AnyForest => 0,
            TypeKey::Tree { rank, .. } | TypeKey::Forest { rank, .. } => *rank,
        }
    }
}

/// Expanded, self-contained form of a type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeValue {
    Leaf(String),
    Tree {
        label: String,
        theta: Vec<(usize, TypeValue)>,
    },
    Forest {
        theta: Vec<(usize, TypeValue)>,
    },
    AnyForest,
}

impl fmt::Display for TypeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let theta = |f: &mut fmt::Formatter<'_>, th: &[(usize, TypeValue)]| {
            write!(f, "{{")?;
            for (i, (c, t)) in th.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}×{t}")?;
            }
            write!(f, "}}")
        };
        match self {
            TypeValue::Leaf(a) => write!(f, "{a}"),
            TypeValue::Tree { label, theta: th } => {
                write!(f, "⟨{label}, ")?;
                theta(f, th)?;
                write!(f, "⟩")
            }
            TypeValue::Forest { theta: th } => theta(f, th),
            TypeValue::AnyForest => write!(f, "⊤"),
        }
    }
}

#[derive(Default)]
struct Interner {
    keys: Vec<TypeKey>,
    index: HashMap<TypeKey, TypeId>,
}

/// Content-addressed table of types for one counting cap `k`.
pub struct TypeTable {
    k: usize,
    inner: Mutex<Interner>,
}

impl TypeTable {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "counting cap must be positive");
        TypeTable {
            k,
            inner: Mutex::new(Interner::default()),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn intern(&self, key: TypeKey) -> TypeId {
        let mut t = self.inner.lock().expect("type table lock");
        if let Some(&id) = t.index.get(&key) {
            return id;
        }
        let id = TypeId(t.keys.len() as u32);
        t.keys.push(key.clone());
        t.index.insert(key, id);
        id
    }

    pub fn key(&self, id: TypeId) -> TypeKey {
        self.inner.lock().expect("type table lock").keys[id.0 as usize].clone()
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("type table lock").keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, id: TypeId) -> TypeValue {
        let expand = |th: Vec<(TypeId, usize)>| {
            th.into_iter()
                .map(|(s, c)| (c, self.value(s)))
                .collect::<Vec<_>>()
        };
        match self.key(id) {
            TypeKey::Leaf(a) => TypeValue::Leaf(a),
            TypeKey::Tree { label, theta, .. } => TypeValue::Tree {
                label,
                theta: expand(theta),
            },
            TypeKey::Forest { theta, .. } => TypeValue::Forest {
                theta: expand(theta),
            },
            TypeKey::AnyForest => TypeValue::AnyForest,
        }
    }

    /// Tree types of every node for ranks `0..=m`.
    pub fn node_types(&self, g: &ForestGraph, m: usize) -> Result<Vec<Vec<TypeId>>> {
        let labels = closed_labels(g)?;
        let cg = CountGraph::new(adjacency(g));
        let mut ranks = vec![labels
            .iter()
            .map(|a| self.intern(TypeKey::Leaf(a.to_string())))
            .collect::<Vec<_>>()];
        for r in 1..=m {
            let prev = &ranks[r - 1];
            let mut theta: Vec<Vec<(TypeId, usize)>> = vec![Vec::new(); g.len()];
            for sigma in distinct(prev) {
                let targets: Vec<bool> = prev.iter().map(|&t| t == sigma).collect();
                let per = cg.paths_to(&targets, self.k);
                for (v, th) in theta.iter_mut().enumerate() {
                    let c = cg.sum_children(v, &per, self.k);
                    if c > 0 {
                        th.push((sigma, c));
                    }
                }
            }
            let row = theta
                .into_iter()
                .enumerate()
                .map(|(v, theta)| {
                    self.intern(TypeKey::Tree {
                        rank: r,
                        label: labels[v].to_string(),
                        theta,
                    })
                })
                .collect();
            ranks.push(row);
        }
        Ok(ranks)
    }

    /// `tp_k^m` of the tree rooted at `v`.
    pub fn tp(&self, g: &ForestGraph, v: usize, m: usize) -> Result<TypeId> {
        g.node(v)?;
        Ok(self.node_types(g, m)?[m][v])
    }

    /// `Tp_k^m` of the forest.
    pub fn forest_type(&self, g: &ForestGraph, m: usize) -> Result<TypeId> {
        if m == 0 {
            closed_labels(g)?;
            return Ok(self.intern(TypeKey::AnyForest));
        }
        let types = self.node_types(g, m - 1)?;
        let prev = &types[m - 1];
        let cg = CountGraph::new(adjacency(g));
        let mut theta = Vec::new();
        for sigma in distinct(prev) {
            let targets: Vec<bool> = prev.iter().map(|&t| t == sigma).collect();
            let per = cg.paths_to(&targets, self.k);
            let c = g
                .roots()
                .iter()
                .fold(0, |acc, &r| (acc + per[r]).min(self.k));
            if c > 0 {
                theta.push((sigma, c));
            }
        }
        Ok(self.intern(TypeKey::Forest { rank: m, theta }))
    }
}

fn closed_labels(g: &ForestGraph) -> Result<Vec<&str>> {
    g.nodes()
        .iter()
        .map(|n| match &n.label {
            Label::Sym(s) => Ok(s.as_str()),
            Label::Var(_) => Err(Error::VariablesPresent),
        })
        .collect()
}

fn adjacency(g: &ForestGraph) -> Vec<Vec<usize>> {
    g.nodes()
        .iter()
        .map(|n| n.children.iter().map(|&(_, c)| c).collect())
        .collect()
}

fn distinct(ids: &[TypeId]) -> Vec<TypeId> {
    ids.iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// `s ∼_k^m t`, decided by comparing forest types.
pub fn equiv(s: &ForestGraph, t: &ForestGraph, k: usize, m: usize) -> Result<bool> {
    let table = TypeTable::new(k);
    Ok(table.forest_type(s, m)? == table.forest_type(t, m)?)
}

/// `≈_k^m` between the trees rooted at `v` in `s` and `w` in `t`.
pub fn tree_equiv(
    s: &ForestGraph,
    v: usize,
    t: &ForestGraph,
    w: usize,
    k: usize,
    m: usize,
) -> Result<bool> {
    let table = TypeTable::new(k);
    Ok(table.tp(s, v, m)? == table.tp(t, w, m)?)
}

/// Tree types realised in a set of forests, per rank.
#[derive(Debug, Clone, Default)]
pub struct TypeUniverse {
    pub by_rank: Vec<BTreeSet<TypeId>>,
}

impl TypeUniverse {
    /// Collects the types of all nodes of `forests` at ranks `0..=max_rank`.
    pub fn realised(table: &TypeTable, forests: &[ForestGraph], max_rank: usize) -> Result<Self> {
        let mut by_rank = vec![BTreeSet::new(); max_rank + 1];
        for g in forests {
            for (r, row) in table.node_types(g, max_rank)?.into_iter().enumerate() {
                by_rank[r].extend(row);
            }
        }
        Ok(TypeUniverse { by_rank })
    }
}

/// The formula `χ_τ` describing type `τ` relative to `universe`: a tree (or
/// forest) whose descendant types all lie in the universe satisfies it iff
/// its type is `τ`.
pub fn chi(table: &TypeTable, universe: &TypeUniverse, tau: TypeId) -> Formula {
    let mut memo = HashMap::new();
    chi_memo(table, universe, tau, &mut memo)
}

fn chi_memo(
    table: &TypeTable,
    universe: &TypeUniverse,
    tau: TypeId,
    memo: &mut HashMap<TypeId, Formula>,
) -> Formula {
    if let Some(f) = memo.get(&tau) {
        return f.clone();
    }
    let k = table.k();
    let mut conjuncts = |rank: usize, theta: &[(TypeId, usize)]| {
        let mut out = Vec::new();
        let lower = universe.by_rank.get(rank - 1).cloned().unwrap_or_default();
        let mut sigmas: BTreeSet<TypeId> = lower;
        sigmas.extend(theta.iter().map(|&(s, _)| s));
        for sigma in sigmas {
            let c = theta
                .iter()
                .find(|&&(s, _)| s == sigma)
                .map_or(0, |&(_, c)| c);
            let sub = chi_memo(table, universe, sigma, memo);
            if c >= 1 {
                out.push(Formula::exists(c, sub.clone()));
            }
            if c < k {
                out.push(Formula::not(Formula::exists(c + 1, sub)));
            }
        }
        out
    };
    let f = match table.key(tau) {
        TypeKey::Leaf(a) => Formula::Label(a),
        TypeKey::AnyForest => Formula::True,
        TypeKey::Tree { rank, label, theta } => {
            let mut parts = vec![Formula::Label(label)];
            parts.extend(conjuncts(rank, &theta));
            Formula::and(parts)
        }
        TypeKey::Forest { rank, theta } => Formula::and(conjuncts(rank, &theta)),
    };
    memo.insert(tau, f.clone());
    f
}

#[cfg(test)]
mod tests {
    use super::super::modelcheck::{modelcheck, Semantics};
    use super::*;
    use crate::forest::{parse_unranked_term, Node, RankedAlphabet};

    fn un(s: &str) -> ForestGraph {
        parse_unranked_term(s).unwrap()
    }

    #[test]
    fn rank_zero_is_label() {
        let t = TypeTable::new(2);
        let g = un("a(b)");
        assert_eq!(
            t.value(t.tp(&g, 0, 0).unwrap()),
            TypeValue::Leaf("a".into())
        );
    }

    #[test]
    fn small_types() {
        let t = TypeTable::new(1);
        let g = un("a");
        assert_eq!(
            t.value(t.forest_type(&g, 1).unwrap()),
            TypeValue::Forest {
                theta: vec![(1, TypeValue::Leaf("a".into()))]
            }
        );
        let t = TypeTable::new(2);
        let g = un("a(b)");
        assert_eq!(
            t.value(t.tp(&g, 0, 1).unwrap()),
            TypeValue::Tree {
                label: "a".into(),
                theta: vec![(1, TypeValue::Leaf("b".into()))]
            }
        );
    }

    #[test]
    fn counting_equivalence() {
        assert!(equiv(&un("a"), &un("a + a"), 1, 1).unwrap());
        assert!(!equiv(&un("a"), &un("a + a"), 2, 1).unwrap());
        let chain = un("a(a(a))");
        let lp = ForestGraph::new(
            RankedAlphabet::unranked(["a"]).unwrap(),
            vec![Node::with_children(Label::sym("a"), vec![(0, 0)])],
            vec![0],
        );
        assert!(equiv(&chain, &lp, 1, 1).unwrap());
        assert!(equiv(&un("a(a)"), &lp, 2, 1).unwrap());
        assert!(!equiv(&un("a(a)"), &lp, 2, 2).unwrap());
    }

    #[test]
    fn chi_describes_its_type() {
        let forests: Vec<ForestGraph> = ["a(b) + b", "a(a + b)", "b(b(a))", "a + a + b"]
            .iter()
            .map(|s| un(s))
            .collect();
        for k in 1..=2 {
            for m in 0..=2 {
                let table = TypeTable::new(k);
                let uni = TypeUniverse::realised(&table, &forests, m).unwrap();
                for s in &forests {
                    let phi = chi(&table, &uni, table.forest_type(s, m).unwrap());
                    for t in &forests {
                        let same =
                            table.forest_type(s, m).unwrap() == table.forest_type(t, m).unwrap();
                        assert_eq!(modelcheck(t, &phi, Semantics::Inclusive).unwrap(), same);
                    }
                }
            }
        }
    }
}
