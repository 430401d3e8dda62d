use std::collections::{BTreeSet, HashMap};

use super::{ForestGraph, Label, NodeId};
use crate::error::{Error, Result};

/// Stable partition of the disjoint union of `s` and `t` under the given
/// signature function. Returns block ids for s-nodes and t-nodes.
fn refine<F, Sig>(s: &ForestGraph, t: &ForestGraph, sig: F) -> (Vec<usize>, Vec<usize>)
where
    F: Fn(&Label, &[(usize, usize)]) -> Sig,
    Sig: std::hash::Hash + Eq,
{
    let off = s.len();
    let labels: Vec<&Label> = s
        .nodes()
        .iter()
        .chain(t.nodes().iter())
        .map(|n| &n.label)
        .collect();
    let children: Vec<Vec<(usize, NodeId)>> = (0..s.len())
        .map(|v| s.sorted_children(v))
        .chain((0..t.len()).map(|v| {
            t.sorted_children(v)
                .into_iter()
                .map(|(e, c)| (e, c + off))
                .collect()
        }))
        .collect();
    let total = labels.len();
    let mut block = vec![0usize; total];
    let mut count = usize::MAX;
    loop {
        let mut ids: HashMap<(usize, Sig), usize> = HashMap::new();
        let mut next = vec![0; total];
        for v in 0..total {
            let cs: Vec<(usize, usize)> = children[v].iter().map(|&(e, c)| (e, block[c])).collect();
            let key = (block[v], sig(labels[v], &cs));
            let len = ids.len();
            next[v] = *ids.entry(key).or_insert(len);
        }
        let new_count = ids.len();
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let tb = block.split_off(off);
    (block, tb)
}

fn label_key(l: &Label) -> String {
    l.to_string()
}

/// Bisimilarity of the unravellings: every root of one forest is bisimilar
/// to some root of the other. Child order is ignored.
pub fn bisimilar(s: &ForestGraph, t: &ForestGraph) -> Result<bool> {
    if s.has_variables() || t.has_variables() {
        return Err(Error::VariablesPresent);
    }
    let (bs, bt) = refine(s, t, |l, cs| {
        let set: BTreeSet<(usize, usize)> = cs.iter().copied().collect();
        (label_key(l), set)
    });
    let rs: BTreeSet<usize> = s.roots().iter().map(|&r| bs[r]).collect();
    let rt: BTreeSet<usize> = t.roots().iter().map(|&r| bt[r]).collect();
    Ok(rs == rt)
}

/// Equality of the denoted forests: the unravellings are isomorphic as
/// ordered forests (children compared per edge label, in order).
pub fn same_forest(s: &ForestGraph, t: &ForestGraph) -> bool {
    let (bs, bt) = refine(s, t, |l, cs| (label_key(l), cs.to_vec()));
    s.roots().len() == t.roots().len()
        && s.roots()
            .iter()
            .zip(t.roots())
            .all(|(&a, &b)| bs[a] == bt[b])
}

#[cfg(test)]
mod tests {
    use super::super::{parse_unranked_term, Node, RankedAlphabet};
    use super::*;

    fn un(s: &str) -> ForestGraph {
        parse_unranked_term(s).unwrap()
    }

    fn a_loop() -> ForestGraph {
        ForestGraph::new(
            RankedAlphabet::unranked(["a"]).unwrap(),
            vec![Node::with_children(Label::sym("a"), vec![(0, 0)])],
            vec![0],
        )
    }

    #[test]
    fn duplicated_components() {
        assert!(bisimilar(&un("a"), &un("a + a")).unwrap());
        assert!(!bisimilar(&un("a"), &un("b")).unwrap());
        assert!(!same_forest(&un("a"), &un("a + a")));
    }

    #[test]
    fn loop_is_not_a_finite_chain() {
        assert!(!bisimilar(&a_loop(), &un("a(a)")).unwrap());
        // unrolled loop denotes the same forest
        let unrolled = ForestGraph::new(
            RankedAlphabet::unranked(["a"]).unwrap(),
            vec![
                Node::with_children(Label::sym("a"), vec![(0, 1)]),
                Node::with_children(Label::sym("a"), vec![(0, 0)]),
            ],
            vec![0],
        );
        assert!(same_forest(&a_loop(), &unrolled));
    }

    #[test]
    fn variables_rejected() {
        assert_eq!(
            bisimilar(&un("a(x0)"), &un("a")),
            Err(Error::VariablesPresent)
        );
    }

    #[test]
    fn order_matters_only_for_same_forest() {
        assert!(bisimilar(&un("a(b + c)"), &un("a(c + b)")).unwrap());
        assert!(!same_forest(&un("a(b + c)"), &un("a(c + b)")));
        assert!(same_forest(&un("a(b + c)"), &un("a(b + c)")));
    }
}
