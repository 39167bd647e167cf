//! Facet enumeration by the double description method.
//!
//! Points are homogenized to rays `(1, x)` and the inequality description
//! of the cone they generate is built one ray at a time. Adjacency of
//! inequalities is decided combinatorially from zero sets, which keeps
//! every step in exact integer arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactq::{inverse, rank, Matrix, Q};
use crate::{Error, Result};

use super::LabelBits;

/// An inequality `f . ray >= 0` together with the set of processed rays on
/// which it vanishes.
#[derive(Clone, Debug)]
struct Halfspace {
    f: Vec<BigInt>,
    zeros: LabelBits,
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// Scales a rational vector by a positive factor to a primitive integer one.
pub(crate) fn integral_ray(v: &[Q]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    primitive(v.iter().map(|x| (x * &lcm).to_integer()).collect())
}

/// Facets of the cone generated by `rays` (full rank), each as a primitive
/// integer inequality and the set of rays on its boundary.
pub(crate) fn cone_facets(rays: &[Vec<Q>]) -> Result<Vec<(Vec<BigInt>, LabelBits)>> {
    let m = rays.first().map_or(0, |r| r.len());
    if rays.len() > LabelBits::CAPACITY {
        return Err(Error::InvalidInput(format!(
            "at most {} generators supported",
            LabelBits::CAPACITY
        )));
    }
    if rank(&Matrix::from_rows(rays)) < m {
        return Err(Error::Degenerate("generators do not span".into()));
    }
    let int_rays: Vec<Vec<BigInt>> = rays.iter().map(|r| integral_ray(r)).collect();

    // greedy initial basis in input order
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..rays.len() {
        let mut trial: Vec<Vec<Q>> = basis.iter().map(|&b| rays[b].clone()).collect();
        trial.push(rays[i].clone());
        if rank(&Matrix::from_rows(&trial)) == trial.len() {
            basis.push(i);
            if basis.len() == m {
                break;
            }
        }
    }
    let bmat = Matrix::from_cols(&basis.iter().map(|&b| rays[b].clone()).collect::<Vec<_>>());
    let inv = inverse(&bmat).expect("basis is invertible");
    let mut processed = LabelBits::empty();
    for &b in &basis {
        processed.insert(b);
    }
    let mut hs: Vec<Halfspace> = (0..m)
        .map(|i| {
            let f = integral_ray(inv.row(i));
            let mut zeros = LabelBits::empty();
            for (k, &b) in basis.iter().enumerate() {
                if k != i {
                    zeros.insert(b);
                }
            }
            Halfspace { f, zeros }
        })
        .collect();

    for r in 0..rays.len() {
        if processed.contains(r) {
            continue;
        }
        let ray = &int_rays[r];
        let vals: Vec<BigInt> = hs.iter().map(|h| int_dot(&h.f, ray)).collect();
        let pos: Vec<usize> = (0..hs.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..hs.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Halfspace> = Vec::new();
        for (i, h) in hs.iter().enumerate() {
            if !vals[i].is_negative() {
                let mut h = h.clone();
                if vals[i].is_zero() {
                    h.zeros.insert(r);
                }
                next.push(h);
            }
        }
        for &p in &pos {
            for &n in &neg {
                let common = hs[p].zeros.and(&hs[n].zeros);
                if common.count() + 2 < m {
                    continue;
                }
                let adjacent = !hs.iter().enumerate().any(|(k, h)| {
                    k != p && k != n && common.is_subset(&h.zeros)
                });
                if !adjacent {
                    continue;
                }
                let f: Vec<BigInt> = hs[n]
                    .f
                    .iter()
                    .zip(&hs[p].f)
                    .map(|(fnn, fp)| &vals[p] * fnn - &vals[n] * fp)
                    .collect();
                let mut zeros = common;
                zeros.insert(r);
                next.push(Halfspace {
                    f: primitive(f),
                    zeros,
                });
            }
        }
        hs = next;
        processed.insert(r);
    }
    Ok(hs.into_iter().map(|h| (h.f, h.zeros)).collect())
}
