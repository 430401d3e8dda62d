//! Equation checks: bisimulation invariance, counting EF for a fixed `k`,
//! counting EF via the constant `K`, and EF.

use super::marked::marked_reach;
use super::report::EquationReport;
use super::term::{evaluate_term, AlgebraTerm as T};
use crate::algebra::{derive_tables, AlgebraPresentation, DerivedTables};
use crate::error::{Error, Result};
use crate::forest::{ForestGraph, Label, Node};

/// Largest `k` for which the (G12) graph path is also evaluated.
pub const G12_GRAPH_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BisimMode {
    /// Exchange equation as equality of arity-4 elements.
    Full,
    /// Exchange equation on all constant instances only.
    RefuteOnly,
}

impl std::str::FromStr for BisimMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(BisimMode::Full),
            "refute-only" => Ok(BisimMode::RefuteOnly),
            _ => Err(Error::Malformed(format!("unknown mode `{s}`"))),
        }
    }
}

/// `|A0|^(2|A1|) + |A0|`, saturating.
pub fn compute_k(pres: &AlgebraPresentation) -> Result<usize> {
    let m0 = pres.elements(0)?.len();
    let m1 = pres.elements(1)?.len();
    let e = u32::try_from(2 * m1).unwrap_or(u32::MAX);
    Ok(m0.saturating_pow(e).saturating_add(m0))
}

/// `(k+3)(|A0|+1) + k + 2`.
pub fn invariance_level(pres: &AlgebraPresentation, k: usize) -> Result<usize> {
    let m0 = pres.elements(0)?.len();
    Ok((k + 3) * (m0 + 1) + k + 2)
}

fn low_arity_generated(pres: &AlgebraPresentation) -> Result<()> {
    pres.elements(0)?;
    pres.elements(1)?;
    if pres
        .generators()
        .iter()
        .any(|g| pres.arity_of(g).is_none_or(|n| n > 1))
    {
        return Err(Error::NotGeneratedByLowArities);
    }
    Ok(())
}

/// `n`-fold sum of `c`, for `n` in `0..=len-1`.
fn multiples(t: &DerivedTables, c: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    let mut acc = t.zero;
    for _ in 0..len {
        out.push(acc);
        acc = t.hsum0[acc][c];
    }
    out
}

pub fn check_bisim_invariance(
    pres: &AlgebraPresentation,
    mode: BisimMode,
) -> Result<EquationReport> {
    let t = derive_tables(pres, 2)?;
    let mut r = EquationReport::new("bisim_invariance");
    let (n0, n1) = (t.a0.len(), t.a1.len());
    r.begin("B1", "c + c = c");
    for c in 0..n0 {
        r.record(&[("c", &t.a0[c])], &t.a0[t.hsum0[c][c]], &t.a0[c]);
    }
    r.begin("B2", "c + d = d + c");
    for c in 0..n0 {
        for d in 0..n0 {
            let inst = [("c", t.a0[c].as_str()), ("d", t.a0[d].as_str())];
            r.record(&inst, &t.a0[t.hsum0[c][d]], &t.a0[t.hsum0[d][c]]);
        }
    }
    r.begin("B3", "a(x0 + x0) = a(x0)");
    for a in 0..n1 {
        let d = t.dup(pres, a, 2)?;
        r.record(&[("a", &t.a1[a])], &t.a1[d], &t.a1[a]);
    }
    r.begin("B4", "a(x0 + x1 + x2 + x3) = a(x0 + x2 + x1 + x3)");
    let order = |v: [T; 4]| {
        let [a, b, c, d] = v;
        (
            T::sum(vec![a.clone(), b.clone(), c.clone(), d.clone()]),
            T::sum(vec![a, c, b, d]),
        )
    };
    match mode {
        BisimMode::Full => {
            r.mode = Some("full".into());
            if !pres.has_arity(4) {
                return Err(Error::MissingArity(4));
            }
            for a in &t.a1 {
                let (l, rr) = order([T::Var(0), T::Var(1), T::Var(2), T::Var(3)]);
                let lhs = evaluate_term(pres, Some(&t), &T::app(a, vec![l]))?;
                let rhs = evaluate_term(pres, Some(&t), &T::app(a, vec![rr]))?;
                r.record(&[("a", a)], &lhs, &rhs);
            }
        }
        BisimMode::RefuteOnly => {
            r.mode = Some("refute-only".into());
            r.notes.push(
                "exchange equation checked on constant instances only; a pass is a pass (constant instances)"
                    .into(),
            );
            for a in &t.a1 {
                for idx in 0..n0.pow(4) {
                    let cs = [idx % n0, idx / n0 % n0, idx / n0 / n0 % n0, idx / n0.pow(3)];
                    let (l, rr) = order(cs.map(|c| T::elem(&t.a0[c])));
                    let lhs = evaluate_term(pres, Some(&t), &T::app(a, vec![l]))?;
                    let rhs = evaluate_term(pres, Some(&t), &T::app(a, vec![rr]))?;
                    let inst = [
                        ("a", a.as_str()),
                        ("c0", &t.a0[cs[0]]),
                        ("c1", &t.a0[cs[1]]),
                        ("c2", &t.a0[cs[2]]),
                        ("c3", &t.a0[cs[3]]),
                    ];
                    r.record(&inst, &lhs, &rhs);
                }
            }
        }
    }
    Ok(r)
}

/// `(equation, instance, table value, graph value)`.
type Disagreement = (String, Vec<(String, String)>, String, String);

/// Records an equation instance evaluated both through the tables and
/// through compiled graphs; disagreements are reported under `AGREE`.
struct Dual<'a> {
    pres: &'a AlgebraPresentation,
    t: &'a DerivedTables,
    agreement: Vec<Disagreement>,
}

impl Dual<'_> {
    fn graph(&self, term: &T) -> Result<String> {
        evaluate_term(self.pres, Some(self.t), term)
    }

    #[allow(clippy::too_many_arguments)]
    fn check(
        &mut self,
        r: &mut EquationReport,
        name: &str,
        inst: &[(&str, &str)],
        lhs_table: &str,
        rhs_table: &str,
        lhs_term: &T,
        rhs_term: &T,
    ) -> Result<()> {
        let (lg, rg) = (self.graph(lhs_term)?, self.graph(rhs_term)?);
        for (tab, gr) in [(lhs_table, &lg), (rhs_table, &rg)] {
            if tab != gr {
                self.agreement.push((
                    name.to_string(),
                    inst.iter()
                        .map(|(k, v)| (k.to_string(), v.to_string()))
                        .collect(),
                    tab.to_string(),
                    gr.clone(),
                ));
            }
        }
        r.record(inst, lhs_table, rhs_table);
        Ok(())
    }
}

/// Checks (G1)_k through (G12)_k.
pub fn check_cefk(pres: &AlgebraPresentation, k: usize) -> Result<EquationReport> {
    low_arity_generated(pres)?;
    if k == 0 {
        return Err(Error::Malformed("k must be at least 1".into()));
    }
    let t = derive_tables(pres, 2)?;
    let mut r = EquationReport::new("cef_k");
    r.k = Some(k);
    let (n0, n1) = (t.a0.len(), t.a1.len());
    let a0 = |i: usize| t.a0[i].as_str();
    let a1 = |i: usize| t.a1[i].as_str();
    let e = |s: &str| T::elem(s);

    r.begin("G1_k", "d + (k-i)c = d + (k-i+1)c, (d, i) marked-reachable");
    for c in 0..n0 {
        let reach = marked_reach(&t, c, k);
        let mult = multiples(&t, c, k + 2);
        for d in 0..n0 {
            for i in reach.unmarked_root_counts(d) {
                let lhs = t.hsum0[d][mult[k - i]];
                let rhs = t.hsum0[d][mult[k - i + 1]];
                let i_s = i.to_string();
                r.record(&[("c", a0(c)), ("d", a0(d)), ("i", &i_s)], a0(lhs), a0(rhs));
            }
        }
    }

    let mut dual = Dual {
        pres,
        t: &t,
        agreement: Vec::new(),
    };
    let omega = |x: T| T::omega(x, 0);

    r.begin("G2", "(ab)^π = b(ab)^π");
    for a in 0..n1 {
        for b in 0..n1 {
            let ab = t.vcomp[a][b];
            let p = t.vpow(ab, t.pi_exp[ab]);
            let lhs = p;
            let rhs = t.vcomp[b][p];
            let abt = T::chain(vec![e(a1(a)), e(a1(b))]);
            dual.check(
                &mut r,
                "G2",
                &[("a", a1(a)), ("b", a1(b))],
                a1(lhs),
                a1(rhs),
                &T::pipow(abt.clone()),
                &T::chain(vec![e(a1(b)), T::pipow(abt)]),
            )?;
        }
    }

    r.begin("G3", "a^ω + a^ω = a^ω");
    for a in 0..n1 {
        let w = t.omega_pow[a];
        let wt = omega(e(a1(a)));
        dual.check(
            &mut r,
            "G3",
            &[("a", a1(a))],
            a0(t.hsum0[w][w]),
            a0(w),
            &T::sum(vec![wt.clone(), wt.clone()]),
            &wt,
        )?;
    }

    r.begin("G4", "c + d = d + c");
    for c in 0..n0 {
        for d in 0..n0 {
            dual.check(
                &mut r,
                "G4",
                &[("c", a0(c)), ("d", a0(d))],
                a0(t.hsum0[c][d]),
                a0(t.hsum0[d][c]),
                &T::sum(vec![e(a0(c)), e(a0(d))]),
                &T::sum(vec![e(a0(d)), e(a0(c))]),
            )?;
        }
    }

    r.begin("G5", "(a(x) + b(x))^ω = (ab(x))^ω");
    for a in 0..n1 {
        for b in 0..n1 {
            dual.check(
                &mut r,
                "G5",
                &[("a", a1(a)), ("b", a1(b))],
                a0(t.omega_pow[t.hsum1[a][b]]),
                a0(t.omega_pow[t.vcomp[a][b]]),
                &omega(T::sum(vec![e(a1(a)), e(a1(b))])),
                &omega(T::chain(vec![e(a1(a)), e(a1(b))])),
            )?;
        }
    }

    r.begin("G6", "(a(x) + c)^ω = (a(x + c))^ω");
    for a in 0..n1 {
        for c in 0..n0 {
            dual.check(
                &mut r,
                "G6",
                &[("a", a1(a)), ("c", a0(c))],
                a0(t.omega_pow[t.plus_const[a][c]]),
                a0(t.omega_pow[t.ext[a][c]]),
                &omega(T::sum(vec![e(a1(a)), e(a0(c))])),
                &omega(T::app(a1(a), vec![T::sum(vec![T::Var(0), e(a0(c))])])),
            )?;
        }
    }

    r.begin("G7", "(a(x + c + c))^ω = (a(x + c))^ω");
    for a in 0..n1 {
        for c in 0..n0 {
            let cc = t.hsum0[c][c];
            dual.check(
                &mut r,
                "G7",
                &[("a", a1(a)), ("c", a0(c))],
                a0(t.omega_pow[t.ext[a][cc]]),
                a0(t.omega_pow[t.ext[a][c]]),
                &omega(T::app(
                    a1(a),
                    vec![T::sum(vec![T::Var(0), e(a0(c)), e(a0(c))])],
                )),
                &omega(T::app(a1(a), vec![T::sum(vec![T::Var(0), e(a0(c))])])),
            )?;
        }
    }

    r.begin("G8", "[a(b(x0 + x1))^ω1]^ω0 = [ab(x0 + x0)]^ω0");
    for a in 0..n1 {
        for b in 0..n1 {
            let (lt, rt) = g8_terms(a1(a), a1(b));
            let lhs = dual.graph(&lt)?;
            let rhs = dual.graph(&rt)?;
            r.record(&[("a", a1(a)), ("b", a1(b))], &lhs, &rhs);
        }
    }

    r.begin("G9", "(abb')^ω = (ab'b)^ω");
    for a in 0..n1 {
        for b in 0..n1 {
            for b2 in 0..n1 {
                let l = t.vcomp[t.vcomp[a][b]][b2];
                let rr = t.vcomp[t.vcomp[a][b2]][b];
                dual.check(
                    &mut r,
                    "G9",
                    &[("a", a1(a)), ("b", a1(b)), ("b'", a1(b2))],
                    a0(t.omega_pow[l]),
                    a0(t.omega_pow[rr]),
                    &omega(T::chain(vec![e(a1(a)), e(a1(b)), e(a1(b2))])),
                    &omega(T::chain(vec![e(a1(a)), e(a1(b2)), e(a1(b))])),
                )?;
            }
        }
    }

    r.begin("G10", "(aab)^ω = (ab)^ω");
    for a in 0..n1 {
        for b in 0..n1 {
            let l = t.vcomp[t.vcomp[a][a]][b];
            let rr = t.vcomp[a][b];
            dual.check(
                &mut r,
                "G10",
                &[("a", a1(a)), ("b", a1(b))],
                a0(t.omega_pow[l]),
                a0(t.omega_pow[rr]),
                &omega(T::chain(vec![e(a1(a)), e(a1(a)), e(a1(b))])),
                &omega(T::chain(vec![e(a1(a)), e(a1(b))])),
            )?;
        }
    }

    r.begin("G11", "[a(x + bc + c)]^ω = [a(x + bc)]^ω");
    for a in 0..n1 {
        for b in 0..n1 {
            for c in 0..n0 {
                let bc = t.act[b][c];
                let bct = T::app(a1(b), vec![e(a0(c))]);
                dual.check(
                    &mut r,
                    "G11",
                    &[("a", a1(a)), ("b", a1(b)), ("c", a0(c))],
                    a0(t.omega_pow[t.ext[a][t.hsum0[bc][c]]]),
                    a0(t.omega_pow[t.ext[a][bc]]),
                    &omega(T::app(
                        a1(a),
                        vec![T::sum(vec![T::Var(0), bct.clone(), e(a0(c))])],
                    )),
                    &omega(T::app(a1(a), vec![T::sum(vec![T::Var(0), bct])])),
                )?;
            }
        }
    }

    r.begin("G12_k", "[a(x + (a(k x))^π c)]^ω = k (a(k x))^π c");
    if k > G12_GRAPH_LIMIT {
        r.notes.push(format!(
            "G12_k graph path skipped for k > {G12_GRAPH_LIMIT}; tables only"
        ));
    }
    for a in 0..n1 {
        let u = t.dup(pres, a, k)?;
        let p = t.vpow(u, t.pi_exp[u]);
        for c in 0..n0 {
            let ec = t.act[p][c];
            let lhs = t.omega_pow[t.ext[a][ec]];
            let rhs = multiples(&t, ec, k + 1)[k];
            let inst = [("a", a1(a)), ("c", a0(c))];
            if k <= G12_GRAPH_LIMIT {
                let ut = T::app(a1(a), vec![T::sum(vec![T::Var(0); k])]);
                let et = T::chain(vec![T::pipow(ut), e(a0(c))]);
                dual.check(
                    &mut r,
                    "G12_k",
                    &inst,
                    a0(lhs),
                    a0(rhs),
                    &omega(T::app(a1(a), vec![T::sum(vec![T::Var(0), et.clone()])])),
                    &T::sum(vec![et; k]),
                )?;
            } else {
                r.record(&inst, a0(lhs), a0(rhs));
            }
        }
    }

    let disagreements = std::mem::take(&mut dual.agreement);
    r.begin("AGREE", "tables = compiled graphs");
    for (eq, inst, tab, gr) in &disagreements {
        let mut pairs: Vec<(&str, &str)> = vec![("equation", eq.as_str())];
        pairs.extend(inst.iter().map(|(k, v)| (k.as_str(), v.as_str())));
        r.record(&pairs, tab, gr);
    }
    Ok(r)
}

/// Both sides of (G8) with `b(x0, x1)` read as `b(x0 + x1)`.
pub fn g8_terms(a: &str, b: &str) -> (T, T) {
    let inner = T::omega(T::app(b, vec![T::sum(vec![T::Var(0), T::Var(1)])]), 1);
    let lhs = T::omega(T::app(a, vec![inner]), 0);
    let rhs = T::omega(
        T::app(a, vec![T::app(b, vec![T::sum(vec![T::Var(0), T::Var(0)])])]),
        0,
    );
    (lhs, rhs)
}

/// The hand-unfolded (G8) loops: `α: a → β; β: b → α, β` and
/// `γ: a → δ; δ: b → γ, γ`.
pub fn g8_loops(pres: &AlgebraPresentation, a: &str, b: &str) -> (ForestGraph, ForestGraph) {
    let node = |l: &str, cs: Vec<usize>| {
        Node::with_children(Label::sym(l), cs.into_iter().map(|c| (0, c)).collect())
    };
    let lhs = ForestGraph::new(
        pres.alphabet().clone(),
        vec![node(a, vec![1]), node(b, vec![0, 1])],
        vec![0],
    );
    let rhs = ForestGraph::new(
        pres.alphabet().clone(),
        vec![node(a, vec![1]), node(b, vec![0, 0])],
        vec![0],
    );
    (lhs, rhs)
}

/// (G1)_k by direct quantification over listed elements of arity `n ≤ k`:
/// `a_n(c, …, c) + (k-n)c = a_n(c, …, c) + (k-n+1)c`, as depth-2 forests.
pub fn check_g1_direct(pres: &AlgebraPresentation, k: usize) -> Result<EquationReport> {
    let mut r = EquationReport::new("g1_direct");
    r.k = Some(k);
    r.begin("G1_k", "a_n(c..c) + (k-n)c = a_n(c..c) + (k-n+1)c");
    let a0 = pres.elements(0)?.to_vec();
    for n in 0..=k {
        if !pres.has_arity(n) {
            return Err(Error::MissingArity(n));
        }
        for an in pres.elements(n)? {
            for c in &a0 {
                let side = |extra: usize| -> Result<String> {
                    let mut nodes = vec![Node::new(Label::sym(an.clone()))];
                    let mut roots = vec![0];
                    for i in 0..n {
                        nodes.push(Node::new(Label::sym(c.clone())));
                        let id = nodes.len() - 1;
                        nodes[0].children.push((i, id));
                    }
                    for _ in 0..extra {
                        nodes.push(Node::new(Label::sym(c.clone())));
                        roots.push(nodes.len() - 1);
                    }
                    pres.evaluate(&ForestGraph::new(pres.alphabet().clone(), nodes, roots), 0)
                };
                let n_s = n.to_string();
                r.record(
                    &[("a_n", an), ("c", c), ("n", &n_s)],
                    &side(k - n)?,
                    &side(k - n + 1)?,
                );
            }
        }
    }
    Ok(r)
}

/// `check_cefk` at `k = K`.
pub fn check_cef(pres: &AlgebraPresentation) -> Result<EquationReport> {
    let k = compute_k(pres)?;
    let mut r = check_cefk(pres, k)?;
    r.check = "cef".into();
    r.notes.insert(0, format!("K = {k}"));
    Ok(r)
}

/// `check_cefk` at `k = 1`, phrased against the EF equation list.
pub fn check_ef(pres: &AlgebraPresentation) -> Result<EquationReport> {
    let mut r = check_cefk(pres, 1)?;
    r.check = "ef".into();
    r.k = None;
    for e in &mut r.equations {
        match e.name.as_str() {
            "G1_k" => e.text = "ac = ac + c, c = c + c".into(),
            "G12_k" => e.text = "[a(x + a^π c)]^ω = a^π c".into(),
            _ => {}
        }
    }
    for f in &mut r.failures {
        if f.equation == "G1_k" {
            let i0 = f.instance.get("i").is_some_and(|i| i == "0");
            f.equation = if i0 { "c = c + c" } else { "ac = ac + c" }.into();
        } else if f.equation == "G12_k" {
            f.equation = "[a(x + a^π c)]^ω = a^π c".into();
        }
    }
    Ok(r)
}
