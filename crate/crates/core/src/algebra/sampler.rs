//! Bounded approximation of the syntactic congruence of a forest language:
//! finite forests are grouped by their membership behaviour under all
//! small contexts. Used to sanity-check hand-built algebras.

use std::collections::BTreeMap;

use crate::forest::{substitute, ForestGraph};
use crate::testkit::enumerate::{enum_contexts, enum_forests, EnumerationBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerBounds {
    /// Largest forest (in nodes) to classify.
    pub size: usize,
    /// Largest context (in nodes, hole included).
    pub context: usize,
}

/// Partitions all forests over `symbols` with at most `bounds.size` nodes;
/// two forests share a class iff no context with at most `bounds.context`
/// nodes separates them. Classes are listed by their smallest member.
pub fn syntactic_sampler(
    oracle: &dyn Fn(&ForestGraph) -> bool,
    symbols: &[String],
    bounds: SamplerBounds,
) -> Vec<Vec<ForestGraph>> {
    let forests = enum_forests(
        symbols,
        EnumerationBudget {
            max_nodes: bounds.size,
            unordered: false,
        },
    );
    let contexts = enum_contexts(symbols, bounds.context);
    let mut classes: BTreeMap<Vec<bool>, (usize, Vec<ForestGraph>)> = BTreeMap::new();
    for (i, s) in forests.into_iter().enumerate() {
        let sig: Vec<bool> = contexts
            .iter()
            .map(|p| oracle(&substitute(p, 0, &s).expect("context has a hole")))
            .collect();
        classes
            .entry(sig)
            .or_insert_with(|| (i, Vec::new()))
            .1
            .push(s);
    }
    let mut out: Vec<(usize, Vec<ForestGraph>)> = classes.into_values().collect();
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, c)| c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::Label;

    fn count_a(g: &ForestGraph) -> usize {
        g.reachable()
            .iter()
            .filter(|&&v| g.nodes()[v].label == Label::sym("a"))
            .count()
    }

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    fn class_of(classes: &[Vec<ForestGraph>], term: &str) -> usize {
        classes
            .iter()
            .position(|c| c.iter().any(|g| g.to_term().as_deref() == Some(term)))
            .unwrap()
    }

    #[test]
    fn contains_a_separates_letters() {
        let b = SamplerBounds {
            size: 2,
            context: 3,
        };
        let cl = syntactic_sampler(&|g| count_a(g) >= 1, &ab(), b);
        assert_eq!(cl.len(), 2);
        assert_eq!(class_of(&cl, "a"), class_of(&cl, "a + b"));
        assert_ne!(class_of(&cl, "a"), class_of(&cl, "b"));
    }

    #[test]
    fn all_forests_single_class() {
        let b = SamplerBounds {
            size: 3,
            context: 2,
        };
        assert_eq!(syntactic_sampler(&|_| true, &ab(), b).len(), 1);
    }

    #[test]
    fn two_a_three_classes() {
        let b = SamplerBounds {
            size: 3,
            context: 3,
        };
        let cl = syntactic_sampler(&|g| count_a(g) >= 2, &ab(), b);
        assert_eq!(cl.len(), 3);
        assert_ne!(class_of(&cl, "a"), class_of(&cl, "a + a"));
    }
}
