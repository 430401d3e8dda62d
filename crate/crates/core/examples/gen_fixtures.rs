//! Writes the fixture algebras, sample forests and oracle-generated expected
//! values into `fixtures/` at the workspace root.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use efcheck_core::algebra::{
    contains_a, derive_tables, inf_branch, trivial, two_a, AlgebraPresentation,
};
use efcheck_core::equations::{check_bisim_invariance, check_cefk, check_ef, compute_k, BisimMode};
use efcheck_core::forest::{
    parse_unranked_term, ForestFile, ForestGraph, Label, Node, RankedAlphabet,
};
use efcheck_core::testkit::brute::brute_marked;
use serde_json::{json, Value};

fn write(path: &Path, v: &Value) {
    let mut text = serde_json::to_string_pretty(v).expect("serialises");
    text.push('\n');
    fs::write(path, text).expect("write fixture");
    println!("wrote {}", path.display());
}

fn forest_json(g: &ForestGraph) -> Value {
    serde_json::to_value(ForestFile::from_graph(g)).expect("serialises")
}

fn fixtures() -> Vec<(&'static str, AlgebraPresentation)> {
    vec![
        ("contains_a", contains_a()),
        ("two_a", two_a()),
        ("inf_branch", inf_branch()),
        ("trivial", trivial()),
    ]
}

fn main() {
    let root: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"));
    let expected = root.join("expected");
    fs::create_dir_all(&expected).expect("create fixture dirs");

    for (name, pres) in fixtures() {
        write(&root.join(format!("{name}.alg")), &pres.to_json_value());

        let tables = derive_tables(&pres, 2).expect("tables");
        write(
            &expected.join(format!("{name}_tables.json")),
            &json!({
                "provenance": "derive_tables, kmax 2: each entry evaluated from its defining forest through the automata; deterministic, no seed",
                "tables": tables.to_json(),
            }),
        );

        let a0 = pres.elements(0).expect("arity 0").to_vec();
        let mut marked = BTreeMap::new();
        for (c, cname) in a0.iter().enumerate() {
            let set = brute_marked(&pres, c, 2, 5).expect("brute marked");
            let rows: Vec<Value> = set
                .into_iter()
                .map(|(d, i, r)| json!([a0[d], i, r]))
                .collect();
            marked.insert(cname.clone(), rows);
        }
        write(
            &expected.join(format!("{name}_marked.json")),
            &json!({
                "provenance": "testkit::brute::brute_marked: exhaustive enumeration of generator forests with marked leaves, size bound 5, cap 2; no seed",
                "cap": 2,
                "size": 5,
                "sets": marked,
            }),
        );

        let mode = if pres.has_arity(4) {
            BisimMode::Full
        } else {
            BisimMode::RefuteOnly
        };
        let bisim = check_bisim_invariance(&pres, mode).expect("bisim").passed();
        let ef = check_ef(&pres).expect("ef").passed();
        let cefk: BTreeMap<String, bool> = (1..=3)
            .map(|k| (k.to_string(), check_cefk(&pres, k).expect("cefk").passed()))
            .collect();
        write(
            &expected.join(format!("{name}_verdicts.json")),
            &json!({
                "provenance": "equation checkers (regression baseline, cross-checked against brute_marked and direct (G1) quantification in tests); deterministic, no seed",
                "K": compute_k(&pres).expect("K"),
                "bisim_invariance": bisim,
                "bisim_mode": if mode == BisimMode::Full { "full" } else { "refute-only" },
                "ef": ef,
                "cef_k": cefk,
            }),
        );
    }

    let un = |s: &str| parse_unranked_term(s).expect("term");
    let a = RankedAlphabet::unranked(["a"]).expect("alphabet");
    let a_loop = ForestGraph::new(
        a,
        vec![Node::with_children(Label::sym("a"), vec![(0, 0)])],
        vec![0],
    );
    let forests = [
        ("single_a", un("a")),
        ("a_plus_b", un("a + b")),
        ("two_a_nested", un("b(a + a)")),
        ("chain_a3", un("a(a(a))")),
        ("a_loop", a_loop),
    ];
    for (name, g) in &forests {
        write(&root.join(format!("{name}.forest")), &forest_json(g));
    }
    write(
        &expected.join("single_a_modelcheck.json"),
        &json!({
            "provenance": "hand evaluation of the counting EF semantics on a one-vertex forest; no seed",
            "formula": "E1(Pa)",
            "forest": "single_a.forest",
            "inclusive": true,
            "literal": false,
        }),
    );
}
