//! Sampled validation of a presentation against the algebra laws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{derive_tables, AlgebraPresentation};
use crate::error::Result;
use crate::forest::{flatten, sing, ForestGraph, Label, NestedForest, NestedNode, Node};
use crate::testkit::random::{random_nested, random_regular_forest};

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub unit_law: Vec<String>,
    pub associativity: Vec<String>,
    pub unique_acceptance: Vec<String>,
    pub omega_laws: Vec<String>,
    pub samples: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.unit_law.is_empty()
            && self.associativity.is_empty()
            && self.unique_acceptance.is_empty()
            && self.omega_laws.is_empty()
    }
}

/// Replaces every inner forest by its value.
fn pre_evaluate(pres: &AlgebraPresentation, s: &NestedForest) -> Result<ForestGraph> {
    let mut nodes = Vec::with_capacity(s.nodes.len());
    for nd in &s.nodes {
        nodes.push(match nd {
            NestedNode::Forest { label, children } => {
                let e = pres.evaluate(label, label.arity())?;
                Node::with_children(Label::Sym(e), children.clone())
            }
            NestedNode::Var(i) => Node::new(Label::Var(*i)),
        });
    }
    Ok(ForestGraph::new(
        pres.alphabet().clone(),
        nodes,
        s.roots.clone(),
    ))
}

/// Checks (i) the unit law for every element, (ii) associativity on
/// `samples` random nested forests, (iii) unique acceptance on `samples`
/// random regular forests and (iv) the monoid and ω-semigroup laws of the
/// derived tables. Only a missing arity 0 or 1 is a hard error.
pub fn validate_presentation(
    pres: &AlgebraPresentation,
    samples: usize,
    seed: u64,
) -> Result<ValidationReport> {
    pres.elements(0)?;
    pres.elements(1)?;
    let mut report = ValidationReport {
        samples,
        ..Default::default()
    };
    for m in pres.arities().collect::<Vec<_>>() {
        for e in pres.elements(m)? {
            let g = sing(pres.alphabet(), e)?;
            match pres.evaluate(&g, m) {
                Ok(v) if v == *e => {}
                Ok(v) => report.unit_law.push(format!("sing({e}) evaluates to {v}")),
                Err(err) => report.unit_law.push(format!("sing({e}): {err}")),
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_inner = pres.max_arity().min(3);
    for _ in 0..samples {
        let s = random_nested(&mut rng, pres.alphabet(), 5, 4, max_inner);
        let outcome = (|| -> Result<Option<String>> {
            let flat = flatten(&s)?;
            let direct = pres.evaluate(&flat, 0)?;
            let staged = pres.evaluate(&pre_evaluate(pres, &s)?, 0)?;
            Ok((direct != staged).then(|| {
                format!(
                    "{}: flattened gives {direct}, staged gives {staged}",
                    flat.to_term().unwrap_or_default()
                )
            }))
        })();
        match outcome {
            Ok(None) => {}
            Ok(Some(msg)) => report.associativity.push(msg),
            Err(err) => report.associativity.push(err.to_string()),
        }
    }
    for _ in 0..samples {
        let g = random_regular_forest(&mut rng, pres.alphabet(), 5);
        if let Err(err) = pres.evaluate(&g, 0) {
            report.unique_acceptance.push(err.to_string());
        }
    }
    match derive_tables(pres, 1) {
        Err(err) => report.omega_laws.push(err.to_string()),
        Ok(t) => {
            let (n0, n1) = (t.a0.len(), t.a1.len());
            for a in 0..n0 {
                if t.hsum0[a][t.zero] != a || t.hsum0[t.zero][a] != a {
                    report
                        .omega_laws
                        .push(format!("{} + 0 differs from {}", t.a0[a], t.a0[a]));
                }
                for b in 0..n0 {
                    for c in 0..n0 {
                        if t.hsum0[t.hsum0[a][b]][c] != t.hsum0[a][t.hsum0[b][c]] {
                            report.omega_laws.push(format!(
                                "hsum0 not associative on {}, {}, {}",
                                t.a0[a], t.a0[b], t.a0[c]
                            ));
                        }
                    }
                }
            }
            for u in 0..n1 {
                for v in 0..n1 {
                    for w in 0..n1 {
                        if t.vcomp[t.vcomp[u][v]][w] != t.vcomp[u][t.vcomp[v][w]] {
                            report.omega_laws.push(format!(
                                "vcomp not associative on {}, {}, {}",
                                t.a1[u], t.a1[v], t.a1[w]
                            ));
                        }
                    }
                }
                let w = t.omega_pow[u];
                if t.act[u][w] != w {
                    report.omega_laws.push(format!(
                        "{}·{}^ω differs from {}^ω",
                        t.a1[u], t.a1[u], t.a1[u]
                    ));
                }
                if t.omega_pow[t.vcomp[u][u]] != w {
                    report
                        .omega_laws
                        .push(format!("({}²)^ω differs from {}^ω", t.a1[u], t.a1[u]));
                }
                if t.omega_pow[t.vpow(u, t.pi_exp[u])] != w {
                    report.omega_laws.push(format!(
                        "idempotent power of {} changes the ω-power",
                        t.a1[u]
                    ));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::{contains_a, inf_branch, two_a};
    use super::*;
    use crate::parity::ParityForestAutomaton;

    #[test]
    fn fixtures_pass() {
        for p in [contains_a(), two_a(), inf_branch()] {
            let r = validate_presentation(&p, 150, 7).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn universal_automaton_causes_multi_accept() {
        let mut p = contains_a();
        let syms: Vec<(String, usize)> = p.alphabet().symbols().to_vec();
        let u = ParityForestAutomaton::universal(syms.iter().map(|(s, a)| (s.as_str(), *a)), 0);
        p.set_automaton("zero", u).unwrap();
        let r = validate_presentation(&p, 30, 1).unwrap();
        assert!(r.unit_law.iter().any(|m| m.contains("all accept")), "{r:?}");
    }
}
