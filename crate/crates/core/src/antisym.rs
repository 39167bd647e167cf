//! Formal rational sums of ordered tuples modulo antisymmetry.
//!
//! A tuple and any permutation of it are identified up to the sign of the
//! permutation; tuples with a repeated entry are zero. Both the sharbly
//! complex and the simplex-symbol modules used for flip identities are
//! built on this type.

use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::exactq::Q;

/// Sorts `items` in place and returns the sign of the sorting permutation,
/// or `None` when two entries are equal.
pub fn sort_with_sign<L: Ord>(items: &mut [L]) -> Option<i32> {
    let mut sign = 1;
    // insertion sort: the swap count gives the parity
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 && items[j - 1] > items[j] {
            items.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if items.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Sign of the permutation taking `from` to `to` (both duplicate-free and
/// with the same entries).
pub fn permutation_sign<L: Ord + Clone>(from: &[L], to: &[L]) -> Option<i32> {
    let mut a = from.to_vec();
    let mut b = to.to_vec();
    let sa = sort_with_sign(&mut a)?;
    let sb = sort_with_sign(&mut b)?;
    (a == b).then_some(sa * sb)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntisymChain<L: Ord> {
    terms: BTreeMap<Vec<L>, Q>,
}

impl<L: Ord> Default for AntisymChain<L> {
    fn default() -> Self {
        AntisymChain {
            terms: BTreeMap::new(),
        }
    }
}

impl<L: Ord + Clone> AntisymChain<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_tuple(tuple: Vec<L>, coeff: Q) -> Self {
        let mut c = Self::new();
        c.add_tuple(tuple, coeff);
        c
    }

    /// Adds `coeff * (tuple)`; the tuple is brought to sorted order first.
    pub fn add_tuple(&mut self, mut tuple: Vec<L>, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let Some(s) = sort_with_sign(&mut tuple) else { return };
        let c = if s > 0 { coeff } else { -coeff };
        self.add_sorted(tuple, c);
    }

    /// Adds a term whose key is already sorted and duplicate-free.
    pub(crate) fn add_sorted(&mut self, key: Vec<L>, coeff: Q) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_sorted(k.clone(), v.clone());
        }
    }

    pub fn sub(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_sorted(k.clone(), -v.clone());
        }
    }

    pub fn scaled(&self, a: &Q) -> Self {
        if a.is_zero() {
            return Self::new();
        }
        AntisymChain {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * a))
                .collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(&-Q::one())
    }

    /// Standard boundary `sum_i (-1)^(i+1) (a_1, .., ^a_i, .., a_m)` with
    /// positions counted from one.
    pub fn boundary(&self) -> Self {
        let mut out = Self::new();
        for (k, v) in &self.terms {
            for i in 0..k.len() {
                let mut face = k.clone();
                face.remove(i);
                let c = if i % 2 == 0 { v.clone() } else { -v.clone() };
                // faces of a sorted tuple stay sorted
                out.add_sorted(face, c);
            }
        }
        out
    }

    /// Prepends `x` to every tuple (the cone operator).
    pub fn cone(&self, x: &L) -> Self {
        let mut out = Self::new();
        for (k, v) in &self.terms {
            let mut t = Vec::with_capacity(k.len() + 1);
            t.push(x.clone());
            t.extend(k.iter().cloned());
            out.add_tuple(t, v.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<L>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, sorted_key: &[L]) -> Q {
        self.terms.get(sorted_key).cloned().unwrap_or_else(Q::zero)
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&[L]) -> bool) -> Self {
        AntisymChain {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn map_labels<M: Ord + Clone>(&self, mut f: impl FnMut(&L) -> M) -> AntisymChain<M> {
        let mut out = AntisymChain::new();
        for (k, v) in &self.terms {
            out.add_tuple(k.iter().map(&mut f).collect(), v.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::q;
    use proptest::prelude::*;

    #[test]
    fn sorting_sign() {
        let mut v = vec![2, 1];
        assert_eq!(sort_with_sign(&mut v), Some(-1));
        let mut v = vec![3, 1, 2];
        assert_eq!(sort_with_sign(&mut v), Some(1));
        let mut v = vec![1, 2, 1];
        assert_eq!(sort_with_sign(&mut v), None);
        assert_eq!(permutation_sign(&[1, 2, 3], &[2, 1, 3]), Some(-1));
        assert_eq!(permutation_sign(&[1, 2, 3], &[2, 1, 4]), None);
    }

    #[test]
    fn antisymmetry_and_repeats() {
        let mut c = AntisymChain::new();
        c.add_tuple(vec![1, 2, 3], q(1));
        c.add_tuple(vec![2, 1, 3], q(1));
        assert!(c.is_zero());
        c.add_tuple(vec![1, 1, 3], q(5));
        assert!(c.is_zero());
    }

    #[test]
    fn boundary_of_triangle() {
        let c = AntisymChain::from_tuple(vec![0, 1, 2], q(1));
        let b = c.boundary();
        assert_eq!(b.coeff(&[1, 2]), q(1));
        assert_eq!(b.coeff(&[0, 2]), q(-1));
        assert_eq!(b.coeff(&[0, 1]), q(1));
    }

    #[test]
    fn cone_boundary_formula() {
        // d(x * c) = c - x * dc
        let mut c = AntisymChain::new();
        c.add_tuple(vec![1, 2, 3], q(2));
        c.add_tuple(vec![1, 3, 4], q(-1));
        let lhs = c.cone(&0).boundary();
        let mut rhs = c.clone();
        rhs.sub(&c.boundary().cone(&0));
        assert_eq!(lhs, rhs);
    }

    proptest! {
        #[test]
        fn boundary_squared_is_zero(tuples in proptest::collection::vec(proptest::collection::vec(0u8..9, 4), 1..6)) {
            let mut c = AntisymChain::new();
            for (i, t) in tuples.into_iter().enumerate() {
                c.add_tuple(t, q(i as i64 + 1));
            }
            prop_assert!(c.boundary().boundary().is_zero());
        }
    }
}
