//! Values of generator forests with marked leaves: triples `(d, i, r)` where
//! `d` is the value with every mark replaced by `c`, `i` the number of marks
//! capped at `cap`, and `r` whether a mark sits at a root.

use std::collections::BTreeSet;

use crate::algebra::DerivedTables;

/// Bitset over `0..=cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(cap: usize) -> Self {
        Bits {
            words: vec![0; cap / 64 + 1],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| wi * 64 + b)
        })
    }

    /// ORs `other` in; true if anything changed.
    fn union(&mut self, other: &Bits) -> bool {
        let mut changed = false;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            let n = *a | b;
            changed |= n != *a;
            *a = n;
        }
        changed
    }

    /// `{min(i + j, cap) : i ∈ self, j ∈ other}`.
    fn sumset(&self, other: &Bits, cap: usize) -> Bits {
        let mut out = Bits::new(cap);
        if self.is_empty() || other.is_empty() {
            return out;
        }
        let nw = out.words.len();
        let top = self.ones().last().expect("non-empty");
        for j in other.ones() {
            let (ws, bs) = (j / 64, j % 64);
            for (wi, &w) in self.words.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                let lo = wi + ws;
                if lo < nw {
                    out.words[lo] |= w << bs;
                }
                if bs > 0 && lo + 1 < nw {
                    out.words[lo + 1] |= w >> (64 - bs);
                }
            }
            // anything at or past cap saturates
            if top + j >= cap {
                out.set(cap);
            }
        }
        let extra = 64 * nw - (cap + 1);
        if extra > 0 {
            let last = nw - 1;
            let mask = u64::MAX >> extra;
            if out.words[last] & !mask != 0 {
                out.words[last] &= mask;
                out.set(cap);
            }
        }
        out
    }
}

/// The least set closed under the rules: `(d, 0, false)` for every `d`,
/// `(c, 1, true)`, horizontal sums and application of arity-1 elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedReach {
    pub c: usize,
    pub cap: usize,
    /// Indexed by `2 * d + r`.
    sets: Vec<Bits>,
}

impl MarkedReach {
    pub fn contains(&self, d: usize, i: usize, r: bool) -> bool {
        i <= self.cap && self.sets[2 * d + r as usize].get(i)
    }

    /// All triples in increasing order.
    pub fn triples(&self) -> BTreeSet<(usize, usize, bool)> {
        let mut out = BTreeSet::new();
        for (idx, s) in self.sets.iter().enumerate() {
            for i in s.ones() {
                out.insert((idx / 2, i, idx % 2 == 1));
            }
        }
        out
    }

    /// Counts `i` with `(d, i, false)` reachable.
    pub fn unmarked_root_counts(&self, d: usize) -> Vec<usize> {
        self.sets[2 * d].ones().collect()
    }
}

pub fn marked_reach(t: &DerivedTables, c: usize, cap: usize) -> MarkedReach {
    let n0 = t.a0.len();
    let mut sets = vec![Bits::new(cap); 2 * n0];
    for d in 0..n0 {
        sets[2 * d].set(0);
    }
    if cap >= 1 {
        sets[2 * c + 1].set(1);
    }
    loop {
        let mut changed = false;
        for x in 0..2 * n0 {
            for y in 0..2 * n0 {
                if sets[x].is_empty() || sets[y].is_empty() {
                    continue;
                }
                let s = sets[x].sumset(&sets[y], cap);
                let d = t.hsum0[x / 2][y / 2];
                let r = (x % 2) | (y % 2);
                changed |= sets[2 * d + r].union(&s);
            }
        }
        for u in 0..t.a1.len() {
            for x in 0..2 * n0 {
                if sets[x].is_empty() {
                    continue;
                }
                let d = t.act[u][x / 2];
                let s = sets[x].clone();
                changed |= sets[2 * d].union(&s);
            }
        }
        if !changed {
            break;
        }
    }
    MarkedReach { c, cap, sets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{derive_tables, two_a};
    use proptest::prelude::*;

    fn bits(cap: usize, xs: &[usize]) -> Bits {
        let mut b = Bits::new(cap);
        for &x in xs {
            b.set(x);
        }
        b
    }

    proptest! {
        #[test]
        fn sumset_matches_naive(
            cap in 0usize..200,
            xs in proptest::collection::vec(0usize..200, 1..6),
            ys in proptest::collection::vec(0usize..200, 1..6),
        ) {
            let xs: Vec<usize> = xs.into_iter().map(|x| x.min(cap)).collect();
            let ys: Vec<usize> = ys.into_iter().map(|y| y.min(cap)).collect();
            let got: BTreeSet<usize> = bits(cap, &xs).sumset(&bits(cap, &ys), cap).ones().collect();
            let want: BTreeSet<usize> = xs
                .iter()
                .flat_map(|&x| ys.iter().map(move |&y| (x + y).min(cap)))
                .collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn cap_zero_has_no_marks() {
        let p = two_a();
        let t = derive_tables(&p, 2).unwrap();
        let one = t.index0("one").unwrap();
        let r = marked_reach(&t, one, 0);
        assert!(r.triples().iter().all(|&(_, i, m)| i == 0 && !m));
    }

    #[test]
    fn two_a_marks_reach_many() {
        let p = two_a();
        let t = derive_tables(&p, 2).unwrap();
        let one = t.index0("one").unwrap();
        let many = t.index0("many").unwrap();
        let r = marked_reach(&t, one, 2);
        assert!(r.contains(one, 1, true));
        assert!(r.contains(many, 2, true));
        assert!(!r.contains(one, 2, true));
    }
}
