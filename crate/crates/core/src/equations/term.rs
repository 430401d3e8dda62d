//! Terms over algebra elements and their compilation to regular forests.
//! ω-powers become loops: every `x_i` leaf is redirected to the roots.

use std::fmt;

use crate::algebra::{AlgebraPresentation, DerivedTables};
use crate::error::{Error, Result};
use crate::forest::{ForestGraph, Label, Node};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraTerm {
    /// The element applied to fresh variables `x0..x{n-1}`.
    Elem(String),
    Var(usize),
    /// An element with one forest per edge label.
    App(String, Vec<AlgebraTerm>),
    Sum(Vec<AlgebraTerm>),
    /// `t1(t2(...tn))`: each term's `x0` is replaced by the next term.
    VChain(Vec<AlgebraTerm>),
    /// ω-power in the given variable.
    Omega(Box<AlgebraTerm>, usize),
    /// Idempotent power of an arity-1 term.
    PiPow(Box<AlgebraTerm>),
}

pub use AlgebraTerm as T;

impl AlgebraTerm {
    pub fn elem(name: &str) -> Self {
        T::Elem(name.to_string())
    }

    pub fn app(name: &str, args: Vec<AlgebraTerm>) -> Self {
        T::App(name.to_string(), args)
    }

    pub fn sum(parts: Vec<AlgebraTerm>) -> Self {
        T::Sum(parts)
    }

    pub fn chain(parts: Vec<AlgebraTerm>) -> Self {
        T::VChain(parts)
    }

    pub fn omega(t: AlgebraTerm, i: usize) -> Self {
        T::Omega(Box::new(t), i)
    }

    pub fn pipow(t: AlgebraTerm) -> Self {
        T::PiPow(Box::new(t))
    }
}

impl fmt::Display for AlgebraTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, ts: &[AlgebraTerm], sep: &str| {
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    write!(f, "{sep}")?;
                }
                write!(f, "{t}")?;
            }
            Ok(())
        };
        match self {
            T::Elem(e) => write!(f, "{e}"),
            T::Var(i) => write!(f, "x{i}"),
            T::App(e, args) => {
                write!(f, "{e}(")?;
                list(f, args, ", ")?;
                write!(f, ")")
            }
            T::Sum(ts) if ts.is_empty() => write!(f, "0"),
            T::Sum(ts) => {
                write!(f, "(")?;
                list(f, ts, " + ")?;
                write!(f, ")")
            }
            T::VChain(ts) => {
                write!(f, "[")?;
                list(f, ts, " · ")?;
                write!(f, "]")
            }
            T::Omega(t, i) => write!(f, "({t})^ω{i}"),
            T::PiPow(t) => write!(f, "({t})^π"),
        }
    }
}

struct Builder<'a> {
    pres: &'a AlgebraPresentation,
    tables: Option<&'a DerivedTables>,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn push(&mut self, label: Label) -> usize {
        self.nodes.push(Node::new(label));
        self.nodes.len() - 1
    }

    /// Replaces, within nodes `range`, every edge into an `x{i}` leaf (and
    /// every such root in `roots`) by edges to `targets`.
    fn plug(
        &mut self,
        range: std::ops::Range<usize>,
        roots: &[usize],
        i: usize,
        targets: &[usize],
    ) -> Vec<usize> {
        let is_hole =
            |nodes: &[Node], v: usize| range.contains(&v) && nodes[v].label == Label::Var(i);
        for v in range.clone() {
            if self.nodes[v]
                .children
                .iter()
                .any(|&(_, c)| is_hole(&self.nodes, c))
            {
                let old = std::mem::take(&mut self.nodes[v].children);
                let mut new = Vec::with_capacity(old.len());
                for (e, c) in old {
                    if is_hole(&self.nodes, c) {
                        new.extend(targets.iter().map(|&t| (e, t)));
                    } else {
                        new.push((e, c));
                    }
                }
                self.nodes[v].children = new;
            }
        }
        let mut out = Vec::new();
        for &r in roots {
            if is_hole(&self.nodes, r) {
                out.extend_from_slice(targets);
            } else {
                out.push(r);
            }
        }
        out
    }

    fn arity(&self, e: &str) -> Result<usize> {
        self.pres
            .arity_of(e)
            .ok_or_else(|| Error::UnknownSymbol(e.to_string()))
    }

    fn build(&mut self, t: &AlgebraTerm) -> Result<Vec<usize>> {
        match t {
            T::Elem(e) => {
                let n = self.arity(e)?;
                let v = self.push(Label::sym(e.clone()));
                for i in 0..n {
                    let x = self.push(Label::Var(i));
                    self.nodes[v].children.push((i, x));
                }
                Ok(vec![v])
            }
            T::Var(i) => Ok(vec![self.push(Label::Var(*i))]),
            T::App(e, args) => {
                let n = self.arity(e)?;
                if args.len() > n {
                    return Err(Error::LabelArity {
                        node: self.nodes.len(),
                        edge: args.len() - 1,
                        arity: n,
                    });
                }
                let v = self.push(Label::sym(e.clone()));
                for (j, a) in args.iter().enumerate() {
                    for r in self.build(a)? {
                        self.nodes[v].children.push((j, r));
                    }
                }
                Ok(vec![v])
            }
            T::Sum(ts) => {
                let mut roots = Vec::new();
                for s in ts {
                    roots.extend(self.build(s)?);
                }
                Ok(roots)
            }
            T::VChain(ts) => {
                let mut parts = Vec::new();
                for s in ts {
                    let start = self.nodes.len();
                    let roots = self.build(s)?;
                    parts.push((start..self.nodes.len(), roots));
                }
                let (_, mut acc) = parts
                    .pop()
                    .ok_or_else(|| Error::Malformed("empty vertical chain".into()))?;
                while let Some((range, roots)) = parts.pop() {
                    acc = self.plug(range, &roots, 0, &acc);
                }
                Ok(acc)
            }
            T::Omega(s, i) => {
                let start = self.nodes.len();
                let roots = self.build(s)?;
                let range = start..self.nodes.len();
                if roots.iter().any(|&r| self.nodes[r].label == Label::Var(*i)) {
                    return Err(Error::IllDefinedOmega(format!(
                        "x{i} occurs at a root of {s}"
                    )));
                }
                if !range.clone().any(|v| self.nodes[v].label == Label::Var(*i)) {
                    return Err(Error::IllDefinedOmega(format!(
                        "x{i} does not occur in {s}"
                    )));
                }
                Ok(self.plug(range, &roots.clone(), *i, &roots))
            }
            T::PiPow(s) => {
                let g = compile(self.pres, self.tables, s)?;
                let e = self.pres.evaluate(&g, 1)?;
                let n = match self.tables.and_then(|t| t.index1(&e).map(|u| t.pi_exp[u])) {
                    Some(n) => n,
                    None => pi_exponent(self.pres, &e)?,
                };
                self.build(&T::VChain(vec![(**s).clone(); n]))
            }
        }
    }
}

/// Minimal `n` with `e^n e^n = e^n`, by evaluation.
fn pi_exponent(pres: &AlgebraPresentation, e: &str) -> Result<usize> {
    let chain = |n: usize| -> Result<String> {
        let g = compile(pres, None, &T::VChain(vec![T::elem(e); n]))?;
        pres.evaluate(&g, 1)
    };
    let limit = pres.elements(1)?.len() + 1;
    for n in 1..=limit {
        let p = chain(n)?;
        if chain(2 * n)? == p {
            return Ok(n);
        }
    }
    Err(Error::IllDefinedOmega(format!(
        "no idempotent power of {e}"
    )))
}

/// The regular forest denoted by `t`, in canonical form.
pub fn compile(
    pres: &AlgebraPresentation,
    tables: Option<&DerivedTables>,
    t: &AlgebraTerm,
) -> Result<ForestGraph> {
    let mut b = Builder {
        pres,
        tables,
        nodes: Vec::new(),
    };
    let roots = b.build(t)?;
    Ok(ForestGraph::new(pres.alphabet().clone(), b.nodes, roots).canonical())
}

/// Compiles and evaluates `t` at the arity of the compiled forest.
pub fn evaluate_term(
    pres: &AlgebraPresentation,
    tables: Option<&DerivedTables>,
    t: &AlgebraTerm,
) -> Result<String> {
    let g = compile(pres, tables, t)?;
    pres.evaluate(&g, g.arity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::contains_a;

    #[test]
    fn omega_of_single_context_is_self_loop() {
        let p = contains_a();
        let g = compile(&p, None, &T::omega(T::app("one_1", vec![T::Var(0)]), 0)).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.nodes()[0].children, vec![(0, 0)]);
        assert_eq!(p.evaluate(&g, 0).unwrap(), "one");
    }

    #[test]
    fn nested_omega_builds_two_node_loops() {
        let p = contains_a();
        let inner = T::omega(
            T::app("zero_1", vec![T::sum(vec![T::Var(0), T::Var(1)])]),
            1,
        );
        let lhs = T::omega(T::app("one_1", vec![inner]), 0);
        let g = compile(&p, None, &lhs).unwrap();
        // α: a → β ; β: b → β, α
        assert_eq!(g.len(), 2);
        assert_eq!(g.nodes()[0].label, Label::sym("one_1"));
        assert_eq!(g.nodes()[0].children, vec![(0, 1)]);
        assert_eq!(g.nodes()[1].children, vec![(0, 0), (0, 1)]);
    }

    #[test]
    fn root_variable_omega_is_rejected() {
        let p = contains_a();
        let t = T::omega(T::sum(vec![T::Var(0), T::elem("one")]), 0);
        assert!(matches!(
            compile(&p, None, &t),
            Err(Error::IllDefinedOmega(_))
        ));
    }

    #[test]
    fn chain_plugs_first_variable() {
        let p = contains_a();
        let t = T::chain(vec![T::elem("zero_1"), T::elem("one_1"), T::elem("zero")]);
        assert_eq!(evaluate_term(&p, None, &t).unwrap(), "one");
        let t = T::pipow(T::elem("one_1"));
        assert_eq!(evaluate_term(&p, None, &t).unwrap(), "one_1");
    }
}
