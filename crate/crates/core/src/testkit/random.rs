//! Seeded random forests, nested forests and regular graphs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::forest::{ForestGraph, Label, NestedForest, NestedNode, Node, RankedAlphabet};

fn pick_parent<R: Rng>(rng: &mut R, arities: &[usize]) -> Option<(usize, usize)> {
    let open: Vec<usize> = (0..arities.len()).filter(|&i| arities[i] > 0).collect();
    let &p = open.choose(rng)?;
    Some((p, rng.gen_range(0..arities[p])))
}

/// A random finite forest with at most `max_nodes` nodes (variable leaves
/// included) in which each of `x0..x{vars-1}` occurs exactly once.
/// Returns `None` when the drawn labels leave no place for the variables.
pub fn random_finite_forest<R: Rng>(
    rng: &mut R,
    alphabet: &RankedAlphabet,
    max_nodes: usize,
    vars: usize,
) -> Option<ForestGraph> {
    if max_nodes <= vars || alphabet.is_empty() {
        return None;
    }
    let symbols = alphabet.symbols();
    let k = rng.gen_range(1..=max_nodes - vars);
    let mut nodes: Vec<Node> = Vec::new();
    let mut arities = Vec::new();
    let mut roots = Vec::new();
    for i in 0..k {
        let (name, ar) = symbols.choose(rng)?.clone();
        let parent = if i == 0 || rng.gen_bool(0.3) {
            None
        } else {
            pick_parent(rng, &arities)
        };
        match parent {
            Some((p, e)) => nodes[p].children.push((e, i)),
            None => roots.push(i),
        }
        nodes.push(Node::new(Label::Sym(name)));
        arities.push(ar);
    }
    for j in 0..vars {
        let (p, e) = pick_parent(rng, &arities)?;
        let id = nodes.len();
        nodes.push(Node::new(Label::Var(j)));
        nodes[p].children.push((e, id));
    }
    Some(ForestGraph::new(alphabet.clone(), nodes, roots))
}

/// A closed random nested forest: at most `outer` outer nodes, each
/// labelled by a finite forest with at most `inner` nodes whose arity does
/// not exceed `max_inner_arity`.
pub fn random_nested<R: Rng>(
    rng: &mut R,
    alphabet: &RankedAlphabet,
    outer: usize,
    inner: usize,
    max_inner_arity: usize,
) -> NestedForest {
    let k = rng.gen_range(1..=outer.max(1));
    let mut nodes = Vec::with_capacity(k);
    let mut arities = Vec::with_capacity(k);
    let mut roots = Vec::new();
    for i in 0..k {
        let label = loop {
            let n = rng.gen_range(0..=max_inner_arity.min(inner.saturating_sub(1)));
            if let Some(g) = random_finite_forest(rng, alphabet, inner, n) {
                break g;
            }
        };
        let parent = if i == 0 || rng.gen_bool(0.3) {
            None
        } else {
            pick_parent(rng, &arities)
        };
        match parent {
            Some((p, e)) => {
                if let NestedNode::Forest { children, .. } = &mut nodes[p] {
                    children.push((e, i));
                }
            }
            None => roots.push(i),
        }
        arities.push(label.arity());
        nodes.push(NestedNode::Forest {
            label,
            children: Vec::new(),
        });
    }
    NestedForest { nodes, roots }
}

/// A random closed graph with at most `max_nodes` nodes; edges may point
/// anywhere, so cycles are common.
pub fn random_regular_forest<R: Rng>(
    rng: &mut R,
    alphabet: &RankedAlphabet,
    max_nodes: usize,
) -> ForestGraph {
    let symbols = alphabet.symbols();
    let k = rng.gen_range(1..=max_nodes.max(1));
    let mut nodes = Vec::with_capacity(k);
    for _ in 0..k {
        let (name, ar) = symbols.choose(rng).expect("nonempty alphabet").clone();
        let mut children = Vec::new();
        if ar > 0 {
            for _ in 0..rng.gen_range(0..=2) {
                children.push((rng.gen_range(0..ar), rng.gen_range(0..k)));
            }
        }
        nodes.push(Node::with_children(Label::Sym(name), children));
    }
    let mut roots: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.4)).collect();
    if roots.is_empty() {
        roots.push(0);
    }
    ForestGraph::new(alphabet.clone(), nodes, roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::flatten;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alphabet() -> RankedAlphabet {
        RankedAlphabet::from_pairs([("a", 0), ("f", 1), ("g", 2)]).unwrap()
    }

    #[test]
    fn finite_forests_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut made = 0;
        for _ in 0..200 {
            let vars = rng.gen_range(0..3);
            if let Some(g) = random_finite_forest(&mut rng, &alphabet(), 5, vars) {
                assert!(g.validate().is_ok(), "{g}");
                assert_eq!(g.arity(), vars);
                assert!(g.len() <= 5);
                made += 1;
            }
        }
        assert!(made > 100);
    }

    #[test]
    fn nested_forests_flatten() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let s = random_nested(&mut rng, &alphabet(), 5, 4, 2);
            let g = flatten(&s).unwrap();
            assert!(g.validate().is_ok());
            assert_eq!(g.arity(), 0);
        }
    }

    #[test]
    fn regular_forests_are_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let g = random_regular_forest(&mut rng, &alphabet(), 5);
            assert!(g.validate().is_ok());
        }
    }
}
