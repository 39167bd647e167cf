//! Positive definite forms, exact shortest-vector enumeration and perfect
//! forms recovered from their minimal vectors.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::sym::{sym_dim, vec_sym};
use crate::exactq::{primitive_normalize_int, q, rank, solve, Matrix, Q};
use crate::{Error, IVec, Result};

/// A perfect form `Q(x) = x^t gram x` with its minimal vectors in label
/// order (signs as supplied).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectForm {
    pub name: String,
    pub n: usize,
    #[serde(with = "matrix_serde")]
    pub gram: Matrix,
    #[serde(with = "crate::exactq::serde_q")]
    pub min_value: Q,
    #[serde(rename = "min_vectors")]
    pub minimal_vectors: Vec<IVec>,
}

pub(crate) mod matrix_serde {
    use crate::exactq::{q_from_str, q_to_string, Matrix, Q};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..m.rows())
            .map(|r| m.row(r).iter().map(q_to_string).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let rows: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|x| q_from_str(x).map_err(serde::de::Error::custom)).collect())
            .collect::<Result<_, _>>()?;
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(serde::de::Error::custom("gram matrix must be square"));
        }
        Ok(Matrix::from_rows(&rows))
    }
}

/// `x^t gram x`.
pub fn evaluate(gram: &Matrix, x: &[i64]) -> Q {
    let mut acc = Q::zero();
    for i in 0..x.len() {
        if x[i] == 0 {
            continue;
        }
        for j in 0..x.len() {
            if x[j] != 0 {
                acc += &gram[(i, j)] * Q::from_integer(BigInt::from(x[i] * x[j]));
            }
        }
    }
    acc
}

/// `x^t gram y`.
pub fn bilinear(gram: &Matrix, x: &[i64], y: &[i64]) -> Q {
    let mut acc = Q::zero();
    for i in 0..x.len() {
        for j in 0..y.len() {
            if x[i] != 0 && y[j] != 0 {
                acc += &gram[(i, j)] * Q::from_integer(BigInt::from(x[i] * y[j]));
            }
        }
    }
    acc
}

/// Completed-square decomposition `Q(x) = sum_i d_i (x_i + sum_{j>i} m_ij x_j)^2`.
struct SquareForm {
    d: Vec<Q>,
    m: Vec<Vec<Q>>,
}

fn complete_squares(gram: &Matrix) -> Result<SquareForm> {
    let n = gram.rows();
    if gram.cols() != n {
        return Err(Error::Dimension("gram matrix must be square".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if gram[(i, j)] != gram[(j, i)] {
                return Err(Error::InvalidInput("gram matrix must be symmetric".into()));
            }
        }
    }
    let mut a = gram.clone();
    let mut d = vec![Q::zero(); n];
    let mut m = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        if !a[(i, i)].is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        d[i] = a[(i, i)].clone();
        for j in i + 1..n {
            m[i][j] = &a[(i, j)] / &d[i];
        }
        for j in i + 1..n {
            for k in i + 1..n {
                let delta = &m[i][j] * &a[(i, k)];
                a[(j, k)] -= delta;
            }
        }
    }
    Ok(SquareForm { d, m })
}

pub fn is_positive_definite(gram: &Matrix) -> bool {
    complete_squares(gram).is_ok()
}

fn floor_q(x: &Q) -> BigInt {
    x.floor().to_integer()
}

/// All nonzero integer vectors with `Q(x) <= bound`, one per sign pair.
pub fn short_vectors(gram: &Matrix, bound: &Q) -> Result<Vec<IVec>> {
    let sq = complete_squares(gram)?;
    let n = gram.rows();
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    enumerate_level(&sq, n, bound, &mut x, &mut out)?;
    let mut res: Vec<IVec> = out
        .into_iter()
        .filter(|v| v.iter().any(|&c| c != 0))
        .map(|v| {
            let lead = v.iter().find(|&&c| c != 0).copied().unwrap_or(1);
            if lead < 0 {
                v.iter().map(|c| -c).collect()
            } else {
                v
            }
        })
        .collect();
    res.sort();
    Ok(res)
}

/// Fixes coordinates `n-1` down to `0`; at level `k` coordinates `k..n` are set.
fn enumerate_level(
    sq: &SquareForm,
    k: usize,
    remaining: &Q,
    x: &mut Vec<i64>,
    out: &mut Vec<IVec>,
) -> Result<()> {
    if k == 0 {
        out.push(x.clone());
        return Ok(());
    }
    let i = k - 1;
    let n = x.len();
    let mut center = Q::zero();
    for j in i + 1..n {
        if x[j] != 0 {
            center -= &sq.m[i][j] * q(x[j]);
        }
    }
    let r = remaining / &sq.d[i];
    // |x_i - center| <= sqrt(r) < floor(sqrt(floor(r))) + 1
    let a = floor_q(&r).sqrt() + BigInt::one();
    let lo = (&center - Q::from_integer(a.clone())).ceil().to_integer();
    let hi = (&center + Q::from_integer(a)).floor().to_integer();
    let (lo, hi) = (
        lo.to_i64().ok_or_else(|| Error::Overflow("search range".into()))?,
        hi.to_i64().ok_or_else(|| Error::Overflow("search range".into()))?,
    );
    // symmetry: the first nonzero coordinate from the top is positive
    let top_zero = x[i + 1..].iter().all(|&c| c == 0);
    for t in lo..=hi {
        if top_zero && t < 0 {
            continue;
        }
        let diff = q(t) - &center;
        let used = &sq.d[i] * &diff * &diff;
        if used > *remaining {
            continue;
        }
        x[i] = t;
        let rest = remaining - used;
        enumerate_level(sq, i, &rest, x, out)?;
    }
    x[i] = 0;
    Ok(())
}

/// The minimum of `Q` over nonzero integer vectors and the vectors that
/// attain it, one per sign pair with first nonzero entry positive.
pub fn minimal_vectors(gram: &Matrix) -> Result<(Q, Vec<IVec>)> {
    let n = gram.rows();
    complete_squares(gram)?;
    let bound = (0..n)
        .map(|i| gram[(i, i)].clone())
        .min()
        .ok_or_else(|| Error::Dimension("empty gram matrix".into()))?;
    let cands = short_vectors(gram, &bound)?;
    let min = cands
        .iter()
        .map(|v| evaluate(gram, v))
        .min()
        .expect("unit vectors lie within the bound");
    let mut vs: Vec<IVec> = cands
        .into_iter()
        .filter(|v| evaluate(gram, v) == min)
        .collect();
    vs.sort();
    Ok((min, vs))
}

fn normalized_set(vs: &[IVec]) -> Result<BTreeSet<IVec>> {
    vs.iter().map(|v| primitive_normalize_int(v)).collect()
}

/// The form taking the value 2 on every given vector. The vectors must be
/// exactly its minimal vectors (up to sign) and their rank-1 forms must
/// span the symmetric matrices.
pub fn form_from_minvecs(name: &str, vectors: &[IVec]) -> Result<PerfectForm> {
    let n = vectors
        .first()
        .ok_or_else(|| Error::InvalidInput("no vectors".into()))?
        .len();
    if vectors.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension("vectors of mixed length".into()));
    }
    let d = sym_dim(n);
    // unknowns: upper-triangle gram entries, row-major
    let rows: Vec<Vec<Q>> = vectors
        .iter()
        .map(|v| {
            vec_sym(v)
                .into_iter()
                .enumerate()
                .map(|(k, x)| {
                    let (i, j) = super::sym::sym_index(n, k);
                    if i == j {
                        x
                    } else {
                        x * q(2)
                    }
                })
                .collect()
        })
        .collect();
    let a = Matrix::from_rows(&rows);
    if rank(&a) < d {
        return Err(Error::NotPerfect(format!(
            "rank-1 forms span {} of {} dimensions",
            rank(&a),
            d
        )));
    }
    let rhs = vec![q(2); vectors.len()];
    let sol = solve(&a, &rhs)
        .ok_or_else(|| Error::NotPerfect("no form is constant on the vectors".into()))?;
    let mut gram = Matrix::zeros(n, n);
    for (k, x) in sol.into_iter().enumerate() {
        let (i, j) = super::sym::sym_index(n, k);
        gram[(i, j)] = x.clone();
        gram[(j, i)] = x;
    }
    let (min, found) = minimal_vectors(&gram)?;
    if min != q(2) {
        return Err(Error::NotPerfect(format!("shorter vectors exist (minimum {min})")));
    }
    if normalized_set(&found)? != normalized_set(vectors)? || found.len() != vectors.len() {
        return Err(Error::NotPerfect(
            "minimal vectors differ from the given set".into(),
        ));
    }
    Ok(PerfectForm {
        name: name.into(),
        n,
        gram,
        min_value: min,
        minimal_vectors: vectors.to_vec(),
    })
}

impl PerfectForm {
    /// Re-derives the minimal vectors from the Gram matrix and compares.
    pub fn verify(&self) -> Result<bool> {
        let (min, found) = minimal_vectors(&self.gram)?;
        Ok(min == self.min_value
            && found.len() == self.minimal_vectors.len()
            && normalized_set(&found)? == normalized_set(&self.minimal_vectors)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voronoi::dataset::{a_n_vectors, all_forms};

    fn gram(rows: &[&[i64]]) -> Matrix {
        Matrix::from_int_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn small_minima() {
        let (m, v) = minimal_vectors(&gram(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(m, q(1));
        assert_eq!(v, vec![vec![0, 1], vec![1, 0]]);
        let (m, v) = minimal_vectors(&gram(&[&[2, 1], &[1, 2]])).unwrap();
        assert_eq!(m, q(2));
        assert_eq!(v, vec![vec![0, 1], vec![1, -1], vec![1, 0]]);
        assert!(matches!(
            minimal_vectors(&gram(&[&[1, 2], &[2, 1]])),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn brute_force_agrees() {
        let g = gram(&[&[4, 1, -1], &[1, 3, 1], &[-1, 1, 5]]);
        let (m, v) = minimal_vectors(&g).unwrap();
        let mut best = None::<Q>;
        let mut all = Vec::new();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -3i64..=3 {
                    let x = vec![a, b, c];
                    if x.iter().all(|&t| t == 0) {
                        continue;
                    }
                    let val = evaluate(&g, &x);
                    if best.as_ref().is_none_or(|b| val < *b) {
                        best = Some(val.clone());
                        all.clear();
                    }
                    if Some(&val) == best.as_ref() {
                        all.push(primitive_normalize_int(&x).unwrap());
                    }
                }
            }
        }
        all.sort();
        all.dedup();
        assert_eq!(Some(m), best);
        assert_eq!(v, all);
    }

    #[test]
    fn a2_and_a3_from_minvecs() {
        let f = form_from_minvecs("A2", &a_n_vectors(2)).unwrap();
        assert_eq!(f.gram, gram(&[&[2, 1], &[1, 2]]));
        let f3 = form_from_minvecs("A3", &a_n_vectors(3)).unwrap();
        let (_, v) = minimal_vectors(&f3.gram).unwrap();
        assert_eq!(v.len(), 6);
        assert!(f3.verify().unwrap());
    }

    #[test]
    fn non_perfect_inputs_rejected() {
        assert!(matches!(
            form_from_minvecs("x", &[vec![1, 0], vec![0, 1]]),
            Err(Error::NotPerfect(_))
        ));
        // constant on these three but (1,1) is shorter
        assert!(form_from_minvecs("x", &[vec![1, 0], vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn every_builtin_form_is_perfect() {
        for f in all_forms().into_iter().filter(|f| f.n <= 4) {
            let pf = form_from_minvecs(&f.name, &f.vectors).unwrap();
            assert!(pf.verify().unwrap(), "{}", f.name);
        }
    }
}
