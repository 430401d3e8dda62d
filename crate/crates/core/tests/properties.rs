//! Property tests across modules: counting-bisimulation invariance of
//! formulas, monotonicity of `equiv`, and evaluation invariants.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use efcheck_core::algebra::{contains_a, inf_branch, two_a, AlgebraPresentation};
use efcheck_core::forest::{bisimilar, hsum, ForestGraph, RankedAlphabet};
use efcheck_core::logic::{equiv, game_equiv, modelcheck, Formula, Semantics};
use efcheck_core::testkit::random::random_regular_forest;

fn ab() -> RankedAlphabet {
    RankedAlphabet::unranked(["a", "b"]).unwrap()
}

fn forest(seed: u64, max_nodes: usize) -> ForestGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_regular_forest(&mut rng, &ab(), max_nodes)
}

/// Tree formulas with counting index at most `k` and `E`-depth at most `m`.
fn tree_formula(k: usize, m: usize) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::label("a")),
        Just(Formula::label("b")),
    ];
    if m == 0 {
        return leaf.boxed();
    }
    let inner = forest_formula(k, m);
    prop_oneof![leaf, inner].boxed()
}

/// Forest formulas with counting index at most `k` and depth at most `m`.
fn forest_formula(k: usize, m: usize) -> BoxedStrategy<Formula> {
    if m == 0 {
        return prop_oneof![Just(Formula::True), Just(Formula::False)].boxed();
    }
    let atom = (1..=k, tree_formula(k, m - 1)).prop_map(|(l, f)| Formula::exists(l, f));
    atom.prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Formula::and),
            prop::collection::vec(inner, 2..3).prop_map(Formula::or),
        ]
    })
    .boxed()
}

fn fixtures() -> Vec<AlgebraPresentation> {
    vec![contains_a(), two_a(), inf_branch()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn equivalent_forests_agree_on_formulas(
        s in 0u64..10_000,
        t in 0u64..10_000,
        phi in forest_formula(2, 2),
    ) {
        let (s, t) = (forest(s, 5), forest(t, 5));
        let (k, m) = (phi.k_index().max(1), phi.depth());
        if equiv(&s, &t, k, m).unwrap() {
            prop_assert_eq!(
                modelcheck(&s, &phi, Semantics::Inclusive).unwrap(),
                modelcheck(&t, &phi, Semantics::Inclusive).unwrap()
            );
        }
    }

    #[test]
    fn equiv_is_monotone(s in 0u64..10_000, t in 0u64..10_000, k in 1usize..=3, m in 0usize..=3) {
        let (s, t) = (forest(s, 4), forest(t, 4));
        if equiv(&s, &t, k + 1, m).unwrap() {
            prop_assert!(equiv(&s, &t, k, m).unwrap());
        }
        if equiv(&s, &t, k, m + 1).unwrap() {
            prop_assert!(equiv(&s, &t, k, m).unwrap());
        }
    }

    #[test]
    fn equiv_is_an_equivalence(s in 0u64..10_000, t in 0u64..10_000, u in 0u64..10_000) {
        let (s, t, u) = (forest(s, 4), forest(t, 4), forest(u, 4));
        prop_assert!(equiv(&s, &s, 2, 2).unwrap());
        prop_assert_eq!(equiv(&s, &t, 2, 2).unwrap(), equiv(&t, &s, 2, 2).unwrap());
        if equiv(&s, &t, 2, 2).unwrap() && equiv(&t, &u, 2, 2).unwrap() {
            prop_assert!(equiv(&s, &u, 2, 2).unwrap());
        }
    }

    #[test]
    fn sum_is_commutative_up_to_equiv(s in 0u64..10_000, t in 0u64..10_000) {
        let (s, t) = (forest(s, 4), forest(t, 4));
        let st = hsum(&s, &t).unwrap();
        let ts = hsum(&t, &s).unwrap();
        prop_assert!(equiv(&st, &ts, 3, 3).unwrap());
        prop_assert!(bisimilar(&st, &ts).unwrap());
    }

    #[test]
    fn bisimilar_forests_agree_with_k_one(s in 0u64..10_000, t in 0u64..10_000) {
        let (s, t) = (forest(s, 4), forest(t, 4));
        if bisimilar(&s, &t).unwrap() {
            for m in 0..=3 {
                prop_assert!(equiv(&s, &t, 1, m).unwrap());
            }
        }
    }

    #[test]
    fn evaluation_ignores_presentation_of_the_graph(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for p in fixtures() {
            let g = random_regular_forest(&mut rng, p.alphabet(), 5);
            let e = p.evaluate(&g, 0).unwrap();
            prop_assert_eq!(&e, &p.evaluate(&g.canonical(), 0).unwrap());
            let back = ForestGraph::from_json(&g.to_json()).unwrap();
            prop_assert_eq!(&e, &p.evaluate(&back, 0).unwrap());
        }
    }
}

#[test]
fn game_oracle_matches_types_on_finite_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let alphabet = ab();
    let mut finite = Vec::new();
    while finite.len() < 40 {
        let g = random_regular_forest(&mut rng, &alphabet, 4);
        if g.is_acyclic() {
            finite.push(g);
        }
    }
    for s in &finite {
        for t in &finite {
            for (k, m) in [(1, 1), (2, 2)] {
                assert_eq!(
                    equiv(s, t, k, m).unwrap(),
                    game_equiv(s, t, k, m).unwrap(),
                    "{:?} / {:?}",
                    s.to_term(),
                    t.to_term()
                );
            }
        }
    }
}

#[test]
fn presentations_round_trip_through_json() {
    for p in fixtures() {
        let back = AlgebraPresentation::from_json(&p.to_json()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let g = random_regular_forest(&mut rng, p.alphabet(), 5);
            assert_eq!(p.evaluate(&g, 0).unwrap(), back.evaluate(&g, 0).unwrap());
        }
    }
}
