//! Generators and brute-force oracles used by validation and tests.

pub mod brute;
pub mod enumerate;
pub mod games;
pub mod pairs;
pub mod random;

use crate::forest::{ForestGraph, NodeId};

/// Key of a finite forest up to the order of siblings.
pub fn unordered_key(g: &ForestGraph) -> String {
    fn go(g: &ForestGraph, v: NodeId) -> String {
        let n = &g.nodes()[v];
        let mut cs: Vec<String> = n
            .children
            .iter()
            .map(|&(e, c)| format!("{e}:{}", go(g, c)))
            .collect();
        cs.sort();
        format!("{}({})", n.label, cs.join(","))
    }
    let mut rs: Vec<String> = g.roots().iter().map(|&r| go(g, r)).collect();
    rs.sort();
    rs.join("+")
}
