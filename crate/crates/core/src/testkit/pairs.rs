//! Pairs of regular forests that are counting-bisimilar by construction:
//! sibling duplication beyond `k`, sibling reordering and loop unrolling.

use rand::seq::SliceRandom;
use rand::Rng;

use super::random::random_regular_forest;
use crate::error::Result;
use crate::forest::{ForestGraph, Node, RankedAlphabet};
use crate::logic::equiv;

/// Every sibling group (roots, or the children of one node under one edge
/// label) gets `k` copies of one member, so that adding one more copy
/// changes no count below `k`.
fn saturate(nodes: &mut [Node], roots: &mut Vec<usize>, group: Option<(usize, usize)>, k: usize) {
    match group {
        None => {
            if let Some(&r) = roots.first() {
                let have = roots.iter().filter(|&&x| x == r).count();
                roots.extend(std::iter::repeat_n(r, k.saturating_sub(have)));
            }
        }
        Some((v, e)) => {
            if let Some(&(_, c)) = nodes[v].children.iter().find(|&&(x, _)| x == e) {
                let have = nodes[v].children.iter().filter(|&&p| p == (e, c)).count();
                for _ in have..k {
                    nodes[v].children.push((e, c));
                }
            }
        }
    }
}

fn groups(nodes: &[Node]) -> Vec<Option<(usize, usize)>> {
    let mut out = vec![None];
    for (v, n) in nodes.iter().enumerate() {
        let mut es: Vec<usize> = n.children.iter().map(|&(e, _)| e).collect();
        es.sort_unstable();
        es.dedup();
        out.extend(es.into_iter().map(|e| Some((v, e))));
    }
    out
}

/// A pair `(s, t)` derived from one random base forest.
fn mutate<R: Rng>(rng: &mut R, base: &ForestGraph, k: usize) -> (ForestGraph, ForestGraph) {
    let mut nodes = base.nodes().to_vec();
    let mut roots = base.roots().to_vec();
    let gs = groups(&nodes);
    let &g = gs.choose(rng).expect("roots group");
    saturate(&mut nodes, &mut roots, g, k);
    let s = ForestGraph::new(base.alphabet().clone(), nodes.clone(), roots.clone());

    // one more copy in the saturated group
    match g {
        None => {
            if let Some(&r) = roots.first() {
                roots.push(r);
            }
        }
        Some((v, e)) => {
            if let Some(&p) = nodes[v].children.iter().find(|&&(x, _)| x == e) {
                nodes[v].children.push(p);
            }
        }
    }
    // reorder siblings
    roots.shuffle(rng);
    for n in &mut nodes {
        n.children.shuffle(rng);
        n.children.sort_by_key(|&(e, _)| e);
    }
    // unroll: a fresh copy of some node takes over one incoming edge
    if rng.gen_bool(0.7) && !nodes.is_empty() {
        let v = rng.gen_range(0..nodes.len());
        let copy = nodes.len();
        nodes.push(nodes[v].clone());
        let incoming: Vec<(usize, usize)> = nodes
            .iter()
            .enumerate()
            .flat_map(|(u, n)| {
                n.children
                    .iter()
                    .enumerate()
                    .filter(|&(_, &(_, c))| c == v)
                    .map(move |(i, _)| (u, i))
                    .collect::<Vec<_>>()
            })
            .collect();
        if let Some(&(u, i)) = incoming.choose(rng) {
            nodes[u].children[i].1 = copy;
        } else if let Some(r) = roots.iter_mut().find(|r| **r == v) {
            *r = copy;
        }
    }
    let t = ForestGraph::new(base.alphabet().clone(), nodes, roots);
    if rng.gen_bool(0.5) {
        (s, t)
    } else {
        (t, s)
    }
}

/// `count` pairs with `s ∼_k^m t`, each checked with `equiv`.
pub fn sample_equiv_pairs<R: Rng>(
    rng: &mut R,
    alphabet: &RankedAlphabet,
    k: usize,
    m: usize,
    count: usize,
    max_nodes: usize,
) -> Result<Vec<(ForestGraph, ForestGraph)>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let base = random_regular_forest(rng, alphabet, max_nodes);
        let (s, t) = mutate(rng, &base, k);
        if equiv(&s, &t, k, m)? {
            out.push((s, t));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::bisimilar;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pairs_are_equivalent_and_bisimilar() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let al = RankedAlphabet::from_pairs([("a", 1), ("b", 1), ("c", 0)]).unwrap();
        let pairs = sample_equiv_pairs(&mut rng, &al, 2, 6, 30, 5).unwrap();
        assert_eq!(pairs.len(), 30);
        for (s, t) in &pairs {
            assert!(bisimilar(s, t).unwrap());
        }
        let distinct = pairs
            .iter()
            .filter(|(s, t)| s.canonical_key() != t.canonical_key())
            .count();
        assert!(distinct > 0);
    }
}
