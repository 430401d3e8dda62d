//! Hand-built presentations used as fixtures: counting algebras for
//! "contains a letter" and "at least two letters", an infinite-branch
//! algebra and the trivial algebra.

use std::collections::{BTreeMap, HashMap};

use super::AlgebraPresentation;
use crate::forest::Label;
use crate::parity::{Nfa, ParityForestAutomaton, TransitionItem};

/// All vectors in `{0..=hi}^len`, lexicographic.
fn vectors(len: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for v in &out {
            for x in lo..=hi {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Sequences of letters whose weights add up (capped componentwise at
/// `cap`) to `target`.
fn sum_nfa(letters: &[(usize, Vec<usize>)], target: &[usize], cap: usize) -> Nfa {
    let zero = vec![0; target.len()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut values = vec![zero.clone()];
    index.insert(zero, 0);
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    let mut i = 0;
    while i < values.len() {
        let p = values[i].clone();
        for (letter, w) in letters {
            let q: Vec<usize> = p.iter().zip(w).map(|(a, b)| (a + b).min(cap)).collect();
            if q.iter().zip(target).any(|(a, t)| a > t) {
                continue;
            }
            let j = *index.entry(q.clone()).or_insert_with(|| {
                values.push(q);
                edges.push(Vec::new());
                values.len() - 1
            });
            edges[i].push((*letter, j));
        }
        i += 1;
    }
    Nfa {
        names: values
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(".")
            })
            .collect(),
        initial: vec![0],
        finals: values.iter().map(|v| v.as_slice() == target).collect(),
        edges,
    }
}

#[derive(Clone, Debug)]
enum Elem {
    /// Count 0 with multiplicity vector of the variables.
    Zero(Vec<usize>),
    /// Positive count, capped.
    Count(usize),
}

fn count_name(c: usize, cap: usize) -> &'static str {
    match (c, cap) {
        (0, _) => "zero",
        (1, 1) | (1, 2) => "one",
        _ => "many",
    }
}

fn elem_name(e: &Elem, m: usize, cap: usize) -> String {
    match e {
        Elem::Zero(_) if m == 0 => "zero".into(),
        Elem::Zero(_) if cap == 1 => format!("zero_{m}"),
        Elem::Zero(mu) => format!(
            "zero_{m}_{}",
            mu.iter().map(|x| x.to_string()).collect::<String>()
        ),
        Elem::Count(c) if m == 0 => count_name(*c, cap).into(),
        Elem::Count(c) => format!("{}_{m}", count_name(*c, cap)),
    }
}

fn elems_of_arity(m: usize, cap: usize) -> Vec<Elem> {
    let mut out: Vec<Elem> = if cap == 1 || m == 0 {
        vec![Elem::Zero(vec![1; m])]
    } else {
        vectors(m, 1, cap).into_iter().map(Elem::Zero).collect()
    };
    out.extend((1..=cap).map(Elem::Count));
    out
}

impl Elem {
    fn own(&self) -> usize {
        match self {
            Elem::Zero(_) => 0,
            Elem::Count(c) => *c,
        }
    }

    /// Factor by which counts below edge `i` contribute.
    fn weight(&self, i: usize) -> usize {
        match self {
            Elem::Zero(mu) => mu[i],
            Elem::Count(_) => 1,
        }
    }
}

/// Counting algebra with threshold `cap` (1 or 2) and arities `0..=max_arity`.
///
/// States for forests of arity `m`: `e{c}` (exactly `c < cap` counted
/// vertices), `g{d}` (at least `d`), and for `cap = 2` also `z{ρ}` (none
/// counted, variable `j` occurring `ρ_j` times, capped).
pub fn counting(cap: usize, max_arity: usize) -> AlgebraPresentation {
    assert!(cap == 1 || cap == 2, "supported thresholds are 1 and 2");
    let labels: Vec<(String, usize, Elem)> = (0..=max_arity)
        .flat_map(|n| {
            elems_of_arity(n, cap)
                .into_iter()
                .map(move |e| (elem_name(&e, n, cap), n, e))
        })
        .collect();
    let mut arities: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    let mut automata = HashMap::new();
    for m in 0..=max_arity {
        let track = cap >= 2 && m >= 1;
        let mut states = Vec::new();
        let mut priority = Vec::new();
        for c in 0..cap {
            states.push(format!("e{c}"));
            priority.push(u32::from(c > 0));
        }
        for d in 0..=cap {
            states.push(format!("g{d}"));
            priority.push(u32::from(d > 0));
        }
        let rhos = if track {
            vectors(m, 0, cap)
        } else {
            Vec::new()
        };
        let z_base = states.len();
        for rho in &rhos {
            states.push(format!(
                "z{}",
                rho.iter().map(|x| x.to_string()).collect::<String>()
            ));
            priority.push(u32::from(rho.iter().any(|&x| x > 0)));
        }
        let e = |c: usize| c;
        let g = |d: usize| cap + d;
        let e_letters: Vec<(usize, Vec<usize>)> = (0..cap).map(|c| (e(c), vec![c])).collect();
        let g_letters: Vec<(usize, Vec<usize>)> = (0..=cap).map(|d| (g(d), vec![d])).collect();
        let z_letters: Vec<(usize, Vec<usize>)> = rhos
            .iter()
            .enumerate()
            .map(|(i, r)| (z_base + i, r.clone()))
            .collect();

        let mut delta: HashMap<(usize, Label), Vec<TransitionItem>> = HashMap::new();
        for (name, n, el) in &labels {
            let label = Label::sym(name.clone());
            let n = *n;
            let per_edge = |letters: &[(usize, Vec<usize>)], targets: &[Vec<usize>], c: usize| {
                TransitionItem {
                    children: (0..n)
                        .map(|i| (i, sum_nfa(letters, &targets[i], c)))
                        .collect(),
                }
            };
            for c in 0..cap {
                let mut items = Vec::new();
                if el.own() <= c {
                    for t in vectors(n, 0, c) {
                        let s: usize = (0..n).map(|i| el.weight(i) * t[i]).sum();
                        if el.own() + s == c {
                            let ts: Vec<Vec<usize>> = t.iter().map(|&x| vec![x]).collect();
                            items.push(per_edge(&e_letters, &ts, cap));
                        }
                    }
                }
                delta.insert((e(c), label.clone()), items);
            }
            for d in 0..=cap {
                let mut items = Vec::new();
                if el.own() >= d {
                    items.push(per_edge(&g_letters, &vec![vec![0]; n], cap));
                } else {
                    for t in vectors(n, 0, d) {
                        let s: usize = (0..n).map(|i| el.weight(i) * t[i]).sum();
                        let tight = (0..n).all(|i| t[i] == 0 || el.own() + s - el.weight(i) < d);
                        if el.own() + s >= d && tight {
                            let ts: Vec<Vec<usize>> = t.iter().map(|&x| vec![x]).collect();
                            items.push(per_edge(&g_letters, &ts, cap));
                        }
                    }
                }
                delta.insert((g(d), label.clone()), items);
            }
            for (ri, rho) in rhos.iter().enumerate() {
                let mut items = Vec::new();
                if let Elem::Zero(mu) = el {
                    let choices = vectors(n, 0, rhos.len() - 1);
                    for pick in choices {
                        let mut total = vec![0; m];
                        for (i, &r) in pick.iter().enumerate() {
                            for j in 0..m {
                                total[j] = (total[j] + mu[i] * rhos[r][j]).min(cap);
                            }
                        }
                        if &total == rho {
                            let ts: Vec<Vec<usize>> =
                                pick.iter().map(|&r| rhos[r].clone()).collect();
                            items.push(per_edge(&z_letters, &ts, cap));
                        }
                    }
                }
                delta.insert((z_base + ri, label.clone()), items);
            }
        }
        for j in 0..m {
            let x = Label::Var(j);
            delta.insert((e(0), x.clone()), vec![TransitionItem::leaf()]);
            delta.insert((g(0), x.clone()), vec![TransitionItem::leaf()]);
            for (ri, rho) in rhos.iter().enumerate() {
                let unit = (0..m).all(|i| rho[i] == usize::from(i == j));
                if unit {
                    delta.insert((z_base + ri, x.clone()), vec![TransitionItem::leaf()]);
                }
            }
        }
        let mut names = Vec::new();
        for el in elems_of_arity(m, cap) {
            let name = elem_name(&el, m, cap);
            let root = match &el {
                Elem::Count(c) if *c == cap => sum_nfa(&g_letters, &[cap], cap),
                Elem::Count(c) => sum_nfa(&e_letters, &[*c], cap),
                Elem::Zero(mu) if track => sum_nfa(&z_letters, mu, cap),
                Elem::Zero(_) => sum_nfa(&e_letters, &[0], cap),
            };
            automata.insert(
                name.clone(),
                ParityForestAutomaton {
                    states: states.clone(),
                    priority: priority.clone(),
                    root,
                    delta: delta.clone(),
                },
            );
            names.push(name);
        }
        arities.insert(m, names);
    }
    let generators = arities[&0].iter().chain(&arities[&1]).cloned().collect();
    let accepted = vec![count_name(cap, cap).to_string()];
    AlgebraPresentation::new(arities, generators, Some(accepted), automata)
        .expect("counting fixture is well formed")
}

/// "Some vertex carries the letter": the two-element-per-arity algebra
/// `zero_m`, `one_m`, listed up to arity 4.
pub fn contains_a() -> AlgebraPresentation {
    counting(1, 4)
}

/// "At least two vertices carry the letter", arities 0 to 2.
pub fn two_a() -> AlgebraPresentation {
    counting(2, 2)
}

/// "Some branch is infinite": elements `fin_m`, `inf_m` up to arity 4.
pub fn inf_branch() -> AlgebraPresentation {
    const MAX: usize = 4;
    let name = |kind: &str, m: usize| {
        if m == 0 {
            kind.to_string()
        } else {
            format!("{kind}_{m}")
        }
    };
    let labels: Vec<(String, usize, bool)> = (0..=MAX)
        .flat_map(|n| [(name("fin", n), n, false), (name("inf", n), n, true)])
        .collect();
    let states: Vec<String> = ["any", "seek", "fin"].map(String::from).to_vec();
    let (any, seek, fin) = (0, 1, 2);
    let star = |q: usize| Nfa::star(&[q]);
    let mut arities = BTreeMap::new();
    let mut automata = HashMap::new();
    let one_seek = Nfa::from_regex("any* seek any*", &states).expect("regex");
    for m in 0..=MAX {
        let mut delta: HashMap<(usize, Label), Vec<TransitionItem>> = HashMap::new();
        for (l, n, infinite) in &labels {
            let label = Label::sym(l.clone());
            let all = |q: usize| TransitionItem {
                children: (0..*n).map(|i| (i, star(q))).collect(),
            };
            delta.insert((any, label.clone()), vec![all(any)]);
            if *infinite {
                delta.insert((seek, label.clone()), vec![all(any)]);
            } else {
                let items = (0..*n)
                    .map(|i| {
                        let mut it = all(any);
                        it.children.insert(i, one_seek.clone());
                        it
                    })
                    .collect();
                delta.insert((seek, label.clone()), items);
                delta.insert((fin, label.clone()), vec![all(fin)]);
            }
        }
        for j in 0..m {
            delta.insert((any, Label::Var(j)), vec![TransitionItem::leaf()]);
            delta.insert((fin, Label::Var(j)), vec![TransitionItem::leaf()]);
        }
        let mk = |root: Nfa| ParityForestAutomaton {
            states: states.clone(),
            priority: vec![0, 0, 1],
            root,
            delta: delta.clone(),
        };
        automata.insert(name("fin", m), mk(star(fin)));
        automata.insert(name("inf", m), mk(one_seek.clone()));
        arities.insert(m, vec![name("fin", m), name("inf", m)]);
    }
    let generators = vec!["fin".into(), "inf".into(), "fin_1".into(), "inf_1".into()];
    AlgebraPresentation::new(arities, generators, Some(vec!["inf".into()]), automata)
        .expect("infinite-branch fixture is well formed")
}

/// One element per arity; every forest evaluates to it.
pub fn trivial() -> AlgebraPresentation {
    const MAX: usize = 4;
    let name = |m: usize| {
        if m == 0 {
            "u".to_string()
        } else {
            format!("u_{m}")
        }
    };
    let symbols: Vec<(String, usize)> = (0..=MAX).map(|m| (name(m), m)).collect();
    let mut arities = BTreeMap::new();
    let mut automata = HashMap::new();
    for m in 0..=MAX {
        let aut =
            ParityForestAutomaton::universal(symbols.iter().map(|(s, a)| (s.as_str(), *a)), m);
        automata.insert(name(m), aut);
        arities.insert(m, vec![name(m)]);
    }
    let generators = vec![name(0), name(1)];
    AlgebraPresentation::new(arities, generators, Some(vec![name(0)]), automata)
        .expect("trivial fixture is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_forest_term, ForestGraph, Node};

    #[test]
    fn element_lists() {
        let t = two_a();
        assert_eq!(t.elements(0).unwrap(), ["zero", "one", "many"]);
        assert_eq!(
            t.elements(1).unwrap(),
            ["zero_1_1", "zero_1_2", "one_1", "many_1"]
        );
        assert_eq!(t.elements(2).unwrap().len(), 6);
        let c = contains_a();
        assert_eq!(c.elements(4).unwrap(), ["zero_4", "one_4"]);
    }

    #[test]
    fn two_a_counts_with_multiplicity() {
        let t = two_a();
        let ev = |s: &str, m: usize| {
            let g = parse_forest_term(s, Some(t.alphabet())).unwrap();
            t.evaluate(&g, m).unwrap()
        };
        assert_eq!(ev("zero_1_2(one)", 0), "many");
        assert_eq!(ev("zero_1_1(one)", 0), "one");
        assert_eq!(ev("one_1(zero) + zero", 0), "one");
        assert_eq!(ev("one_1(one)", 0), "many");
        assert_eq!(ev("zero_1_1(x0 + x0)", 1), "zero_1_2");
        assert_eq!(ev("zero_2_12(x0, zero)", 1), "zero_1_1");
        assert_eq!(ev("zero_1_1(x0) + one", 1), "one_1");
        let lp = ForestGraph::new(
            t.alphabet().clone(),
            vec![Node::with_children(Label::sym("one_1"), vec![(0, 0)])],
            vec![0],
        );
        assert_eq!(t.evaluate(&lp, 0).unwrap(), "many");
    }

    #[test]
    fn infinite_branch() {
        let a = inf_branch();
        let chain = parse_forest_term("fin_1(fin_1(fin))", Some(a.alphabet())).unwrap();
        assert_eq!(a.evaluate(&chain, 0).unwrap(), "fin");
        let lp = ForestGraph::new(
            a.alphabet().clone(),
            vec![Node::with_children(Label::sym("fin_1"), vec![(0, 0)])],
            vec![0],
        );
        assert_eq!(a.evaluate(&lp, 0).unwrap(), "inf");
        let g = parse_forest_term("fin_2(x0, inf)", Some(a.alphabet())).unwrap();
        assert_eq!(a.evaluate(&g, 1).unwrap(), "inf_1");
    }
}
