//! Counting bisimulation decided literally: matching of `k`-tuples of
//! vertices with equal equality pattern, on finite forests. Serves as an
//! independent oracle for the type-based decision.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::forest::{ForestGraph, Label};

/// Hash-consed finite trees, ordered children irrelevant.
#[derive(Default)]
struct Trees {
    nodes: Vec<(String, Vec<usize>)>,
    index: HashMap<(String, Vec<usize>), usize>,
    /// Strict descendants of every tree, one entry per vertex.
    below: Vec<Vec<usize>>,
}

impl Trees {
    fn add(&mut self, label: String, mut children: Vec<usize>) -> usize {
        children.sort_unstable();
        let key = (label, children);
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.nodes.len();
        let mut below = Vec::new();
        for &c in &key.1 {
            below.push(c);
            below.extend(self.below[c].iter().copied());
        }
        self.below.push(below);
        self.nodes.push(key.clone());
        self.index.insert(key, id);
        id
    }
}

/// Memoising oracle for `≈_k^m` and `∼_k^m` on finite forests.
pub struct GameOracle {
    k: usize,
    trees: Trees,
    memo: HashMap<(usize, usize, usize), bool>,
}

impl GameOracle {
    pub fn new(k: usize) -> Self {
        GameOracle {
            k,
            trees: Trees::default(),
            memo: HashMap::new(),
        }
    }

    /// Root tree ids of an acyclic closed forest.
    fn load(&mut self, g: &ForestGraph) -> Result<Vec<usize>> {
        if !g.is_acyclic() {
            return Err(Error::Cyclic);
        }
        fn go(g: &ForestGraph, v: usize, trees: &mut Trees) -> Result<usize> {
            let n = &g.nodes()[v];
            let label = match &n.label {
                Label::Sym(s) => s.clone(),
                Label::Var(_) => return Err(Error::VariablesPresent),
            };
            let cs = n
                .children
                .iter()
                .map(|&(_, c)| go(g, c, trees))
                .collect::<Result<Vec<_>>>()?;
            Ok(trees.add(label, cs))
        }
        g.roots()
            .iter()
            .map(|&r| go(g, r, &mut self.trees))
            .collect()
    }

    /// Every `k`-tuple over `xs` is matched by a `k`-tuple over `ys` with
    /// pairwise `≈^m` components and the same equality pattern.
    fn forth(&mut self, xs: &[usize], ys: &[usize], m: usize, flip: bool) -> bool {
        let k = self.k;
        if xs.is_empty() {
            return true;
        }
        if ys.is_empty() {
            return false;
        }
        let mut xt = vec![0usize; k];
        loop {
            let mut yt = vec![0usize; k];
            let found = loop {
                let ok = (0..k).all(|i| {
                    let (a, b) = if flip {
                        (ys[yt[i]], xs[xt[i]])
                    } else {
                        (xs[xt[i]], ys[yt[i]])
                    };
                    self.tree_equiv_ids(a, b, m)
                }) && (0..k).all(|i| (0..k).all(|j| (xt[i] == xt[j]) == (yt[i] == yt[j])));
                if ok {
                    break true;
                }
                if !advance(&mut yt, ys.len()) {
                    break false;
                }
            };
            if !found {
                return false;
            }
            if !advance(&mut xt, xs.len()) {
                return true;
            }
        }
    }

    fn tree_equiv_ids(&mut self, a: usize, b: usize, m: usize) -> bool {
        if let Some(&r) = self.memo.get(&(a, b, m)) {
            return r;
        }
        let r = self.trees.nodes[a].0 == self.trees.nodes[b].0
            && (m == 0 || {
                let xa = self.trees.below[a].clone();
                let yb = self.trees.below[b].clone();
                self.forth(&xa, &yb, m - 1, false) && self.forth(&yb, &xa, m - 1, true)
            });
        self.memo.insert((a, b, m), r);
        r
    }

    /// All vertices of a forest, one entry per vertex.
    fn vertices(&self, roots: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for &r in roots {
            out.push(r);
            out.extend(self.trees.below[r].iter().copied());
        }
        out
    }

    /// `s ∼_k^m t`.
    pub fn forest_equiv(&mut self, s: &ForestGraph, t: &ForestGraph, m: usize) -> Result<bool> {
        let rs = self.load(s)?;
        let rt = self.load(t)?;
        if m == 0 {
            return Ok(true);
        }
        let (xs, ys) = (self.vertices(&rs), self.vertices(&rt));
        Ok(self.forth(&xs, &ys, m - 1, false) && self.forth(&ys, &xs, m - 1, true))
    }

    /// `≈_k^m` between the trees rooted at `v` in `s` and `w` in `t`.
    pub fn tree_equiv(
        &mut self,
        s: &ForestGraph,
        v: usize,
        t: &ForestGraph,
        w: usize,
        m: usize,
    ) -> Result<bool> {
        let a = self.load(&s.subtree(v)?)?[0];
        let b = self.load(&t.subtree(w)?)?[0];
        Ok(self.tree_equiv_ids(a, b, m))
    }
}

/// Odometer step over `{0..base}^len`; false after the last tuple.
fn advance(t: &mut [usize], base: usize) -> bool {
    for x in t.iter_mut() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

/// `s ∼_k^m t` for finite forests by tuple matching.
pub fn game_equiv(s: &ForestGraph, t: &ForestGraph, k: usize, m: usize) -> Result<bool> {
    GameOracle::new(k).forest_equiv(s, t, m)
}
