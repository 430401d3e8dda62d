//! Operation tables on arities 0 and 1, each entry obtained by evaluating a
//! small defining forest.

use std::collections::HashMap;
use std::sync::RwLock;

use serde_json::{json, Value};

use super::AlgebraPresentation;
use crate::error::Result;
use crate::forest::{ForestGraph, Label, Node};

/// Indices refer to `a0` / `a1`.
#[derive(Debug)]
pub struct DerivedTables {
    pub a0: Vec<String>,
    pub a1: Vec<String>,
    /// Value of the empty forest, the unit of `hsum0`.
    pub zero: usize,
    pub hsum0: Vec<Vec<usize>>,
    /// `act[u][a]`: value of `u(a)`.
    pub act: Vec<Vec<usize>>,
    /// `vcomp[u][v]`: value of `u(v(x0))`.
    pub vcomp: Vec<Vec<usize>>,
    /// Value of the `u`-self-loop.
    pub omega_pow: Vec<usize>,
    pub pi_exp: Vec<usize>,
    /// `hsum1[u][v]`: value of `u(x0) + v(x0)`.
    pub hsum1: Vec<Vec<usize>>,
    /// `ext[u][c]`: value of `u(x0 + c)`.
    pub ext: Vec<Vec<usize>>,
    /// `plus_const[u][c]`: value of `u(x0) + c`.
    pub plus_const: Vec<Vec<usize>>,
    pub kmax: usize,
    sub: RwLock<HashMap<(usize, usize, usize), usize>>,
    dup: RwLock<HashMap<(usize, usize), usize>>,
}

/// Builder for the small defining forests.
struct Shapes<'a> {
    pres: &'a AlgebraPresentation,
}

impl Shapes<'_> {
    fn graph(&self, nodes: Vec<Node>, roots: Vec<usize>) -> ForestGraph {
        ForestGraph::new(self.pres.alphabet().clone(), nodes, roots)
    }

    fn leaf(name: &str) -> Node {
        Node::new(Label::sym(name))
    }

    fn unary(name: &str, children: Vec<usize>) -> Node {
        Node::with_children(
            Label::sym(name),
            children.into_iter().map(|c| (0, c)).collect(),
        )
    }

    fn eval(&self, g: ForestGraph, m: usize, list: &[String]) -> Result<usize> {
        let e = self.pres.evaluate(&g, m)?;
        Ok(list
            .iter()
            .position(|x| *x == e)
            .expect("evaluate returns listed elements"))
    }
}

fn table2(
    rows: usize,
    cols: usize,
    mut f: impl FnMut(usize, usize) -> Result<usize>,
) -> Result<Vec<Vec<usize>>> {
    (0..rows)
        .map(|i| (0..cols).map(|j| f(i, j)).collect())
        .collect()
}

/// Builds all tables; `sub` and `dup` are filled for multiplicities up to
/// `kmax` and extended on demand.
pub fn derive_tables(pres: &AlgebraPresentation, kmax: usize) -> Result<DerivedTables> {
    let a0 = pres.elements(0)?.to_vec();
    let a1 = pres.elements(1)?.to_vec();
    let s = Shapes { pres };
    let x = || Node::new(Label::Var(0));
    let zero = s.eval(s.graph(Vec::new(), Vec::new()), 0, &a0)?;
    let hsum0 = table2(a0.len(), a0.len(), |i, j| {
        let g = s.graph(vec![Shapes::leaf(&a0[i]), Shapes::leaf(&a0[j])], vec![0, 1]);
        s.eval(g, 0, &a0)
    })?;
    let act = table2(a1.len(), a0.len(), |u, a| {
        let g = s.graph(
            vec![Shapes::unary(&a1[u], vec![1]), Shapes::leaf(&a0[a])],
            vec![0],
        );
        s.eval(g, 0, &a0)
    })?;
    let vcomp = table2(a1.len(), a1.len(), |u, v| {
        let g = s.graph(
            vec![
                Shapes::unary(&a1[u], vec![1]),
                Shapes::unary(&a1[v], vec![2]),
                x(),
            ],
            vec![0],
        );
        s.eval(g, 1, &a1)
    })?;
    let omega_pow = (0..a1.len())
        .map(|u| {
            s.eval(
                s.graph(vec![Shapes::unary(&a1[u], vec![0])], vec![0]),
                0,
                &a0,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let pi_exp = (0..a1.len())
        .map(|u| {
            let mut p = u;
            let mut n = 1;
            while vcomp[p][p] != p {
                p = vcomp[p][u];
                n += 1;
            }
            n
        })
        .collect();
    let hsum1 = table2(a1.len(), a1.len(), |u, v| {
        let g = s.graph(
            vec![
                Shapes::unary(&a1[u], vec![2]),
                Shapes::unary(&a1[v], vec![2]),
                x(),
            ],
            vec![0, 1],
        );
        s.eval(g, 1, &a1)
    })?;
    let ext = table2(a1.len(), a0.len(), |u, c| {
        let g = s.graph(
            vec![Shapes::unary(&a1[u], vec![1, 2]), x(), Shapes::leaf(&a0[c])],
            vec![0],
        );
        s.eval(g, 1, &a1)
    })?;
    let plus_const = table2(a1.len(), a0.len(), |u, c| {
        let g = s.graph(
            vec![Shapes::unary(&a1[u], vec![1]), x(), Shapes::leaf(&a0[c])],
            vec![0, 2],
        );
        s.eval(g, 1, &a1)
    })?;
    let t = DerivedTables {
        a0,
        a1,
        zero,
        hsum0,
        act,
        vcomp,
        omega_pow,
        pi_exp,
        hsum1,
        ext,
        plus_const,
        kmax,
        sub: RwLock::new(HashMap::new()),
        dup: RwLock::new(HashMap::new()),
    };
    for u in 0..t.a1.len() {
        for m in 1..=kmax {
            t.dup(pres, u, m)?;
            for c in 0..t.a0.len() {
                t.sub(pres, u, m, c)?;
            }
        }
    }
    Ok(t)
}

impl DerivedTables {
    pub fn index0(&self, name: &str) -> Option<usize> {
        self.a0.iter().position(|x| x == name)
    }

    pub fn index1(&self, name: &str) -> Option<usize> {
        self.a1.iter().position(|x| x == name)
    }

    /// Value of `u(m×x0 + c)`.
    pub fn sub(&self, pres: &AlgebraPresentation, u: usize, m: usize, c: usize) -> Result<usize> {
        if let Some(&v) = self.sub.read().expect("table lock").get(&(u, m, c)) {
            return Ok(v);
        }
        let s = Shapes { pres };
        let mut children = vec![1; m];
        children.push(2);
        let g = s.graph(
            vec![
                Shapes::unary(&self.a1[u], children),
                Node::new(Label::Var(0)),
                Shapes::leaf(&self.a0[c]),
            ],
            vec![0],
        );
        let v = s.eval(g, 1, &self.a1)?;
        self.sub.write().expect("table lock").insert((u, m, c), v);
        Ok(v)
    }

    /// Value of `u(m×x0)`.
    pub fn dup(&self, pres: &AlgebraPresentation, u: usize, m: usize) -> Result<usize> {
        if let Some(&v) = self.dup.read().expect("table lock").get(&(u, m)) {
            return Ok(v);
        }
        let s = Shapes { pres };
        let g = s.graph(
            vec![
                Shapes::unary(&self.a1[u], vec![1; m]),
                Node::new(Label::Var(0)),
            ],
            vec![0],
        );
        let v = s.eval(g, 1, &self.a1)?;
        self.dup.write().expect("table lock").insert((u, m), v);
        Ok(v)
    }

    /// `u^n` under vertical composition, for `n ≥ 1`.
    pub fn vpow(&self, u: usize, n: usize) -> usize {
        let mut p = u;
        for _ in 1..n {
            p = self.vcomp[p][u];
        }
        p
    }

    /// Deterministic JSON rendering with element names.
    pub fn to_json(&self) -> Value {
        let n0 = |i: usize| self.a0[i].clone();
        let n1 = |i: usize| self.a1[i].clone();
        let grid = |t: &Vec<Vec<usize>>, name: &dyn Fn(usize) -> String| -> Vec<Vec<String>> {
            t.iter()
                .map(|r| r.iter().map(|&x| name(x)).collect())
                .collect()
        };
        let mut sub = Vec::new();
        let mut dup = Vec::new();
        for u in 0..self.a1.len() {
            for m in 1..=self.kmax {
                if let Some(&d) = self.dup.read().expect("table lock").get(&(u, m)) {
                    dup.push(json!([n1(u), m, n1(d)]));
                }
                for c in 0..self.a0.len() {
                    if let Some(&v) = self.sub.read().expect("table lock").get(&(u, m, c)) {
                        sub.push(json!([n1(u), m, n0(c), n1(v)]));
                    }
                }
            }
        }
        json!({
            "A0": self.a0,
            "A1": self.a1,
            "zero": n0(self.zero),
            "hsum0": grid(&self.hsum0, &n0),
            "act": grid(&self.act, &n0),
            "vcomp": grid(&self.vcomp, &n1),
            "omegaPow": self.omega_pow.iter().map(|&x| n0(x)).collect::<Vec<_>>(),
            "piExp": self.pi_exp,
            "hsum1": grid(&self.hsum1, &n1),
            "ext": grid(&self.ext, &n1),
            "plusConst": grid(&self.plus_const, &n1),
            "sub": sub,
            "dup": dup,
        })
    }
}

/// `a ≤ b` in the left order: `a = c(b)` for some context `c`, or
/// `a = b + d` for some `d`.
pub fn leq_l(t: &DerivedTables, a: usize, b: usize) -> bool {
    (0..t.a1.len()).any(|c| t.act[c][b] == a) || (0..t.a0.len()).any(|d| t.hsum0[b][d] == a)
}
