//! Orientation signs and degeneracy in the trace-1 section, and the sign
//! certificate showing the volume cocycle is nonzero on a cycle.
//!
//! Points of the section are written in the coordinates of `Y`. The
//! determinant of `d` such points equals the determinant of
//! `(b_1, b_2 - b_1, .., b_d - b_1)`, so its sign is the orientation of the
//! displacement frame relative to the outward trace direction.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactq::{affine_dim, det, dot, rank, sign, Matrix, Q};
use crate::sharbly::SharblyChain;
use crate::voronoi::sym::{section_point, sym_dim, trace};
use crate::voronoi::vec_sym;
use crate::{Error, IVec, Result};

/// `d` ordered points of the section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedSectionSimplex {
    #[serde(with = "crate::polytope::serde_points")]
    pub points: Vec<Vec<Q>>,
}

impl OrientedSectionSimplex {
    pub fn new(points: Vec<Vec<Q>>) -> Result<Self> {
        let d = points.len();
        if d == 0 || points.iter().any(|p| p.len() != d) {
            return Err(Error::Dimension("need d points in a d-dimensional space".into()));
        }
        Ok(OrientedSectionSimplex { points })
    }

    /// Section points `v''` of the given vectors.
    pub fn from_vectors(vectors: &[IVec]) -> Result<Self> {
        let pts = vectors.iter().map(|v| section_point(v)).collect::<Result<Vec<_>>>()?;
        let n = vectors.first().map_or(0, |v| v.len());
        if pts.len() != sym_dim(n) {
            return Err(Error::Dimension(format!(
                "{} vectors, expected {}",
                pts.len(),
                sym_dim(n)
            )));
        }
        Self::new(pts)
    }

    pub fn is_proper(&self) -> bool {
        affine_dim(&self.points).is_ok_and(|a| a + 1 == self.points.len())
    }
}

/// Orientation sign of `d` ordered points; 0 iff they are affinely dependent.
pub fn epsilon(points: &[Vec<Q>]) -> Result<i32> {
    let d = points.len();
    if d == 0 || points.iter().any(|p| p.len() != d) {
        return Err(Error::Dimension(format!("epsilon needs {d} points of length {d}")));
    }
    Ok(sign(&det(&Matrix::from_rows(points))?))
}

/// The section points of `d` vectors lie in an affine subspace of
/// dimension at most `d - 2`.
pub fn is_flipon(vectors: &[IVec]) -> Result<bool> {
    let s = OrientedSectionSimplex::from_vectors(vectors)?;
    Ok(epsilon(&s.points)? == 0)
}

/// Same predicate by the linear rank of the rank-1 forms `v'` in `Y`.
pub fn is_flipon_by_rank(vectors: &[IVec]) -> bool {
    let rows: Vec<Vec<Q>> = vectors.iter().map(|v| vec_sym(v)).collect();
    rank(&Matrix::from_rows(&rows)) < vectors.len()
}

/// Points (not necessarily in a section) that fail to be affinely independent.
pub fn is_degenerate_points(points: &[Vec<Q>]) -> Result<bool> {
    Ok(affine_dim(points)? + 1 < points.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Flipon,
    ProperPositive,
    ProperNegative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermVerdict {
    pub vectors: Vec<IVec>,
    #[serde(with = "crate::exactq::serde_q")]
    pub coeff: Q,
    pub epsilon: i32,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityCertificate {
    pub terms: Vec<TermVerdict>,
    pub valid: bool,
}

impl PositivityCertificate {
    /// Recomputes every sign and the aggregate verdict.
    pub fn check(&self) -> Result<bool> {
        let mut chain = SharblyChain::new();
        for t in &self.terms {
            chain.add_vectors(&t.vectors, t.coeff.clone())?;
        }
        let fresh = mu_sign_certificate(&chain)?;
        Ok(fresh.terms == self.terms && fresh.valid == self.valid)
    }
}

/// Classifies each term of `z` by the sign of `coeff * epsilon`. Valid iff
/// no term is proper-negative and at least one is proper-positive.
pub fn mu_sign_certificate(z: &SharblyChain) -> Result<PositivityCertificate> {
    let mut terms = Vec::new();
    for (b, c) in z.iter() {
        let s = OrientedSectionSimplex::from_vectors(&b.vectors)?;
        let e = epsilon(&s.points)?;
        let verdict = match e * sign(c) {
            0 => Verdict::Flipon,
            x if x > 0 => Verdict::ProperPositive,
            _ => Verdict::ProperNegative,
        };
        terms.push(TermVerdict {
            vectors: b.vectors.clone(),
            coeff: c.clone(),
            epsilon: e,
            verdict,
        });
    }
    let valid = terms.iter().all(|t| t.verdict != Verdict::ProperNegative)
        && terms.iter().any(|t| t.verdict == Verdict::ProperPositive);
    Ok(PositivityCertificate { terms, valid })
}

/// Squared Euclidean volume of a proper simplex, from the Gram determinant
/// of its edge vectors.
pub fn euclidean_volume_section(s: &OrientedSectionSimplex) -> Result<Q> {
    squared_volume(&s.points)
}

/// Squared volume of the simplex spanned by `k + 1` points in any `R^m`.
pub fn squared_volume(points: &[Vec<Q>]) -> Result<Q> {
    let first = points
        .first()
        .ok_or_else(|| Error::Dimension("empty simplex".into()))?;
    let edges: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    let k = edges.len();
    if k == 0 {
        return Ok(Q::one());
    }
    let mut gram = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = dot(&edges[i], &edges[j]);
        }
    }
    let g = det(&gram)?;
    if g.is_zero() {
        return Err(Error::Degenerate("simplex is not proper".into()));
    }
    let fact = (1..=k as i64).fold(num_bigint::BigInt::one(), |a, x| a * x);
    Ok(g / Q::from_integer(fact.clone() * fact))
}

/// Checks that every point has trace 1.
pub fn in_section(points: &[Vec<Q>], n: usize) -> bool {
    points.iter().all(|p| trace(p, n).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::{q, qf};
    use crate::sharbly::canonicalize_int;

    #[test]
    fn a2_sign() {
        let s = OrientedSectionSimplex::from_vectors(&[vec![1, 0], vec![0, 1], vec![1, -1]]).unwrap();
        assert!(in_section(&s.points, 2));
        assert!(s.is_proper());
        assert_eq!(epsilon(&s.points).unwrap(), 1);
        let mut p = s.points.clone();
        p.swap(0, 2);
        assert_eq!(epsilon(&p).unwrap(), -1);
        assert!(epsilon(&p[..2]).is_err());
    }

    #[test]
    fn degenerate_points() {
        let seg = vec![vec![q(1), q(0), q(0)], vec![qf(1, 2), q(0), qf(1, 2)], vec![q(0), q(0), q(1)]];
        assert_eq!(epsilon(&seg).unwrap(), 0);
        assert!(is_degenerate_points(&seg).unwrap());
        assert!(!OrientedSectionSimplex::new(seg.clone()).unwrap().is_proper());
    }

    #[test]
    fn flipon_examples() {
        assert!(!is_flipon(&[vec![1, 0], vec![0, 1], vec![1, -1]]).unwrap());
        let f = vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![1, 1, 0],
            vec![1, -1, 0],
            vec![0, 0, 1],
            vec![1, 0, 1],
        ];
        assert!(is_flipon(&f).unwrap());
        assert!(is_flipon_by_rank(&f));
        assert!(canonicalize_int(&f).unwrap().is_some());
    }

    #[test]
    fn certificate_verdicts() {
        let mut z = SharblyChain::new();
        z.add_vectors(&[vec![1, 0], vec![0, 1], vec![1, -1]], qf(1, 6)).unwrap();
        let c = mu_sign_certificate(&z).unwrap();
        assert!(c.valid);
        assert!(c.check().unwrap());
        let neg = mu_sign_certificate(&z.scaled(&q(-1))).unwrap();
        assert!(!neg.valid);
        assert_eq!(neg.terms[0].verdict, Verdict::ProperNegative);
        let mut only_flipons = SharblyChain::new();
        only_flipons
            .add_vectors(
                &[
                    vec![1, 0, 0],
                    vec![0, 1, 0],
                    vec![1, 1, 0],
                    vec![1, -1, 0],
                    vec![0, 0, 1],
                    vec![1, 0, 1],
                ],
                q(1),
            )
            .unwrap();
        let f = mu_sign_certificate(&only_flipons).unwrap();
        assert!(!f.valid);
        assert!(!mu_sign_certificate(&SharblyChain::new()).unwrap().valid);
    }

    #[test]
    fn volumes() {
        for k in 1..5usize {
            let mut pts = vec![vec![q(0); k]];
            for i in 0..k {
                let mut p = vec![q(0); k];
                p[i] = q(1);
                pts.push(p);
            }
            let f: i64 = (1..=k as i64).product();
            assert_eq!(squared_volume(&pts).unwrap(), qf(1, f * f));
        }
        let a2 = OrientedSectionSimplex::from_vectors(&[vec![1, 0], vec![0, 1], vec![1, -1]]).unwrap();
        assert!(euclidean_volume_section(&a2).unwrap() > q(0));
        let seg = vec![vec![q(0), q(0)], vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(squared_volume(&seg).is_err());
    }
}
