//! Orbit representatives for basic sharblies under `SL_n(Z)`.
//!
//! Classes are keyed by a cheap invariant (the sorted `|det|` of every
//! `n`-subset) and resolved by an exact equivalence search. The first
//! basic seen in an orbit becomes its representative.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

use super::{automorphisms, equivalent_with_budget, BasicSharbly, SharblyChain};
use crate::exactq::{int_det, Q};
use crate::voronoi::GroupElement;
use crate::{Budget, Result};

/// An orbit class. `is_zero` classes contain a basic negated by one of its
/// automorphisms (`witness`), so they vanish in the coinvariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub id: usize,
    pub representative: BasicSharbly,
    pub is_zero: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<GroupElement>,
}

/// Where a basic landed: `transport * basic = sign * representative`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitLookup {
    pub class_id: usize,
    pub transport: GroupElement,
    pub sign: i32,
}

type Key = (usize, usize, Vec<i128>);

#[derive(Clone, Debug)]
pub struct OrbitDictionary {
    classes: Vec<OrbitClass>,
    index: HashMap<Key, Vec<usize>>,
    budget: Budget,
}

impl Default for OrbitDictionary {
    fn default() -> Self {
        Self::new()
    }
}

fn key(b: &BasicSharbly) -> Key {
    let n = b.n();
    let m = b.len();
    let mut dets = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let rows: Vec<&[i64]> = idx.iter().map(|&i| b.vectors[i].as_slice()).collect();
        dets.push(int_det(&rows).abs());
        // next n-subset in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                dets.sort_unstable();
                return (n, m, dets);
            }
            i -= 1;
            if idx[i] < m - n + i {
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

impl OrbitDictionary {
    pub fn new() -> Self {
        Self::with_budget(Budget::unlimited())
    }

    /// A dictionary whose searches share one node budget.
    pub fn with_budget(budget: Budget) -> Self {
        OrbitDictionary {
            classes: Vec::new(),
            index: HashMap::new(),
            budget,
        }
    }

    pub fn classes(&self) -> &[OrbitClass] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> Option<&OrbitClass> {
        self.classes.get(id)
    }

    pub fn budget_used(&self) -> u64 {
        self.budget.used()
    }

    /// Finds (or creates) the class of `b`.
    pub fn lookup(&mut self, b: &BasicSharbly) -> Result<OrbitLookup> {
        let k = key(b);
        if let Some(ids) = self.index.get(&k) {
            for &id in ids {
                let rep = &self.classes[id].representative;
                if let Some((g, s)) = equivalent_with_budget(b, rep, &mut self.budget)? {
                    return Ok(OrbitLookup {
                        class_id: id,
                        transport: g,
                        sign: s,
                    });
                }
            }
        }
        let witness = automorphisms(b, &mut self.budget)?
            .into_iter()
            .find(|(_, s)| *s < 0)
            .map(|(g, _)| g);
        let id = self.classes.len();
        self.classes.push(OrbitClass {
            id,
            representative: b.clone(),
            is_zero: witness.is_some(),
            witness,
        });
        self.index.entry(k).or_default().push(id);
        Ok(OrbitLookup {
            class_id: id,
            transport: GroupElement::identity(b.n()),
            sign: 1,
        })
    }
}

/// A chain in the coinvariants: coefficients on nonzero orbit classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoinvariantChain {
    pub terms: BTreeMap<usize, Q>,
}

impl CoinvariantChain {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, class_id: usize, c: Q) {
        let e = self.terms.entry(class_id).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&class_id);
        }
    }
}

/// Image of `chain` in the coinvariants, classes registered in `dict`.
pub fn project_coinvariants(chain: &SharblyChain, dict: &mut OrbitDictionary) -> Result<CoinvariantChain> {
    let mut out = CoinvariantChain::default();
    for (b, c) in chain.iter() {
        let l = dict.lookup(b)?;
        if dict.classes[l.class_id].is_zero {
            continue;
        }
        out.add(l.class_id, c * Q::from_integer(l.sign.into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::q;
    use crate::sharbly::canonicalize_int;

    fn basic(vs: &[&[i64]]) -> BasicSharbly {
        canonicalize_int(&vs.iter().map(|v| v.to_vec()).collect::<Vec<_>>())
            .unwrap()
            .unwrap()
            .1
    }

    #[test]
    fn standard_basis_class_vanishes() {
        let mut d = OrbitDictionary::new();
        let e = basic(&[&[1, 0], &[0, 1]]);
        let l = d.lookup(&e).unwrap();
        let c = d.class(l.class_id).unwrap();
        assert!(c.is_zero);
        let w = c.witness.clone().unwrap();
        assert_eq!(e.act(&w), (-1, e.clone()));
        let f = basic(&[&[0, 1], &[1, -1]]);
        let l2 = d.lookup(&f).unwrap();
        assert_eq!(l2.class_id, l.class_id);
        assert_eq!(f.act(&l2.transport), (l2.sign, e));
    }

    #[test]
    fn a2_boundary_projects_to_zero() {
        let mut chain = SharblyChain::new();
        chain.add_vectors(&[vec![1, 0], vec![0, 1], vec![1, -1]], q(1)).unwrap();
        let mut d = OrbitDictionary::new();
        let p = project_coinvariants(&chain.boundary().unwrap(), &mut d).unwrap();
        assert!(p.is_zero());
        let p0 = project_coinvariants(&chain, &mut d).unwrap();
        // the top cell has the order-3 rotation only: not self-negating
        assert_eq!(p0.terms.len(), 1);
    }

    #[test]
    fn inequivalent_bases_get_distinct_classes() {
        let mut d = OrbitDictionary::new();
        let a = d.lookup(&basic(&[&[1, 0], &[0, 1]])).unwrap();
        let b = d.lookup(&basic(&[&[1, 0], &[1, 2]])).unwrap();
        assert_ne!(a.class_id, b.class_id);
        assert_eq!(d.classes().len(), 2);
    }
}
