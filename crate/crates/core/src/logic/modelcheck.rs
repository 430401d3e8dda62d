//! Model checking counting EF on regular forests.

use std::collections::HashMap;

use super::count::CountGraph;
use super::formula::Formula;
use crate::error::{Error, Result};
use crate::forest::{ForestGraph, Label};

/// How `E_l` counts vertices of the forest it is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Semantics {
    /// Every vertex of the forest counts, roots included.
    #[default]
    Inclusive,
    /// Roots of the forest are excluded.
    Literal,
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inclusive" => Ok(Semantics::Inclusive),
            "literal" => Ok(Semantics::Literal),
            _ => Err(Error::Malformed(format!("unknown semantics `{s}`"))),
        }
    }
}

struct Checker<'a> {
    labels: Vec<Option<&'a str>>,
    cg: CountGraph,
    semantics: Semantics,
    tree_memo: HashMap<Formula, Vec<bool>>,
}

impl Checker<'_> {
    /// Truth of a tree formula at every node.
    fn tree(&mut self, f: &Formula) -> Vec<bool> {
        if let Some(v) = self.tree_memo.get(f) {
            return v.clone();
        }
        let n = self.labels.len();
        let out = match f {
            Formula::True => vec![true; n],
            Formula::False => vec![false; n],
            Formula::Label(a) => self.labels.iter().map(|l| *l == Some(a.as_str())).collect(),
            Formula::Exists(..) => self.forest(f),
            Formula::Not(g) => self.tree(g).into_iter().map(|b| !b).collect(),
            Formula::And(gs) => {
                let mut acc = vec![true; n];
                for g in gs {
                    for (a, b) in acc.iter_mut().zip(self.tree(g)) {
                        *a &= b;
                    }
                }
                acc
            }
            Formula::Or(gs) => {
                let mut acc = vec![false; n];
                for g in gs {
                    for (a, b) in acc.iter_mut().zip(self.tree(g)) {
                        *a |= b;
                    }
                }
                acc
            }
        };
        self.tree_memo.insert(f.clone(), out.clone());
        out
    }

    /// Truth of a forest formula on the successor forest of every node.
    fn forest(&mut self, f: &Formula) -> Vec<bool> {
        let n = self.labels.len();
        match f {
            Formula::Exists(l, g) => {
                let truth = self.tree(g);
                let per = self.cg.paths_to(&truth, *l);
                let below = match self.semantics {
                    Semantics::Inclusive => per,
                    Semantics::Literal => {
                        (0..n).map(|v| self.cg.sum_children(v, &per, *l)).collect()
                    }
                };
                (0..n)
                    .map(|v| self.cg.sum_children(v, &below, *l) >= *l)
                    .collect()
            }
            // boolean structure is shared with tree formulas
            _ => self.tree(f),
        }
    }
}

/// Whether the unravelling of `g` satisfies the forest formula `phi`.
pub fn modelcheck(g: &ForestGraph, phi: &Formula, semantics: Semantics) -> Result<bool> {
    Ok(modelcheck_all(std::slice::from_ref(g), phi, semantics)?[0])
}

/// `modelcheck` on each forest of `gs`, sharing one pass over their
/// disjoint union.
pub fn modelcheck_all(
    gs: &[ForestGraph],
    phi: &Formula,
    semantics: Semantics,
) -> Result<Vec<bool>> {
    if gs.iter().any(ForestGraph::has_variables) {
        return Err(Error::VariablesPresent);
    }
    if !phi.is_forest_formula() {
        return Err(Error::Malformed(
            "tree formula where forest formula expected".into(),
        ));
    }
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut labels: Vec<Option<&str>> = Vec::new();
    let mut tops = Vec::with_capacity(gs.len());
    for g in gs {
        let base = adj.len();
        for nd in g.nodes() {
            adj.push(nd.children.iter().map(|&(_, c)| c + base).collect());
            labels.push(match &nd.label {
                Label::Sym(s) => Some(s.as_str()),
                Label::Var(_) => None,
            });
        }
        // a virtual node whose successor forest is `g` itself
        tops.push(adj.len());
        adj.push(g.roots().iter().map(|&r| r + base).collect());
        labels.push(None);
    }
    let mut c = Checker {
        labels,
        cg: CountGraph::new(adj),
        semantics,
        tree_memo: HashMap::new(),
    };
    let truth = c.forest(phi);
    Ok(tops.into_iter().map(|t| truth[t]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_unranked_term, Node, RankedAlphabet};

    fn f(s: &str) -> Formula {
        Formula::parse_forest(s).unwrap()
    }

    #[test]
    fn semantics_differ_on_roots() {
        let a = parse_unranked_term("a").unwrap();
        assert!(modelcheck(&a, &f("E1(Pa)"), Semantics::Inclusive).unwrap());
        assert!(!modelcheck(&a, &f("E1(Pa)"), Semantics::Literal).unwrap());
    }

    #[test]
    fn counting() {
        let g = parse_unranked_term("b(a)").unwrap();
        for s in [Semantics::Inclusive, Semantics::Literal] {
            assert!(!modelcheck(&g, &f("E2(Pa)"), s).unwrap());
        }
        assert!(modelcheck(&g, &f("E1(Pb & E1(Pa))"), Semantics::Inclusive).unwrap());
        assert!(!modelcheck(&g, &f("E1(Pb & E1(Pa))"), Semantics::Literal).unwrap());
    }

    #[test]
    fn self_loop_has_unboundedly_many() {
        let g = ForestGraph::new(
            RankedAlphabet::unranked(["a"]).unwrap(),
            vec![Node::with_children(Label::sym("a"), vec![(0, 0)])],
            vec![0],
        );
        for k in 1..=10 {
            let phi = Formula::exists(k, Formula::label("a"));
            for s in [Semantics::Inclusive, Semantics::Literal] {
                assert!(modelcheck(&g, &phi, s).unwrap());
            }
        }
    }

    #[test]
    fn tree_formula_rejected() {
        let g = parse_unranked_term("a").unwrap();
        assert!(modelcheck(&g, &Formula::label("a"), Semantics::Inclusive).is_err());
    }

    #[test]
    fn batch_matches_single() {
        let gs: Vec<ForestGraph> = ["a", "b(a)", "a(a) + b", "b(b(b))", "0"]
            .iter()
            .map(|t| parse_unranked_term(t).unwrap())
            .collect();
        for phi in ["E1(Pa)", "E2(Pa) | E1(Pb & E1(Pb))", "!E1(!E1(true))"] {
            for s in [Semantics::Inclusive, Semantics::Literal] {
                let one: Vec<bool> = gs
                    .iter()
                    .map(|g| modelcheck(g, &f(phi), s).unwrap())
                    .collect();
                assert_eq!(modelcheck_all(&gs, &f(phi), s).unwrap(), one, "{phi}");
            }
        }
    }
}
