//! Symmetric matrices as vectors in the ordered upper-triangle basis
//! `(y11, y12, .., y1n, y22, .., ynn)`.

use num_traits::Zero;

use crate::exactq::{q, Matrix, Q};
use crate::{Error, Result};

pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Matrix position `(i, j)`, `i <= j`, of coordinate `k`.
pub fn sym_index(n: usize, k: usize) -> (usize, usize) {
    let mut k = k;
    for i in 0..n {
        let len = n - i;
        if k < len {
            return (i, i + k);
        }
        k -= len;
    }
    panic!("coordinate out of range")
}

/// Coordinates of `v v^t`.
pub fn vec_sym(v: &[i64]) -> Vec<Q> {
    let n = v.len();
    let mut out = Vec::with_capacity(sym_dim(n));
    for i in 0..n {
        for j in i..n {
            out.push(q(v[i] * v[j]));
        }
    }
    out
}

/// The rank-1 form `v v^t` as a matrix.
pub fn rank1(v: &[i64]) -> Result<Matrix> {
    if v.iter().all(|&c| c == 0) {
        return Err(Error::ZeroVector);
    }
    let n = v.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = q(v[i] * v[j]);
        }
    }
    Ok(m)
}

/// Coordinates of a symmetric matrix.
pub fn vectorize(m: &Matrix) -> Vec<Q> {
    let n = m.rows();
    let mut out = Vec::with_capacity(sym_dim(n));
    for i in 0..n {
        for j in i..n {
            out.push(m[(i, j)].clone());
        }
    }
    out
}

/// Trace of a vectorized symmetric matrix.
pub fn trace(y: &[Q], n: usize) -> Q {
    (0..y.len())
        .filter(|&k| {
            let (i, j) = sym_index(n, k);
            i == j
        })
        .fold(Q::zero(), |acc, k| acc + &y[k])
}

/// The positive rescaling of `y` with trace 1.
pub fn normalize_to_section(y: &[Q], n: usize) -> Result<Vec<Q>> {
    let t = trace(y, n);
    if t <= Q::zero() {
        return Err(Error::InvalidInput("trace must be positive".into()));
    }
    Ok(y.iter().map(|x| x / &t).collect())
}

/// Section point `v'' = v v^t / |v|^2`.
pub fn section_point(v: &[i64]) -> Result<Vec<Q>> {
    if v.iter().all(|&c| c == 0) {
        return Err(Error::ZeroVector);
    }
    normalize_to_section(&vec_sym(v), v.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::{qf, rank};

    #[test]
    fn coordinates() {
        assert_eq!(sym_dim(4), 10);
        assert_eq!(sym_index(3, 0), (0, 0));
        assert_eq!(sym_index(3, 2), (0, 2));
        assert_eq!(sym_index(3, 3), (1, 1));
        assert_eq!(sym_index(3, 5), (2, 2));
        assert_eq!(vec_sym(&[1, -1]), vec![q(1), q(-1), q(1)]);
    }

    #[test]
    fn rank_one_and_section() {
        let m = rank1(&[1, -1]).unwrap();
        assert_eq!(rank(&m), 1);
        assert_eq!(vectorize(&m), vec_sym(&[1, -1]));
        assert!(rank1(&[0, 0]).is_err());
        assert_eq!(section_point(&[1, 0]).unwrap(), vec![q(1), q(0), q(0)]);
        assert_eq!(
            section_point(&[1, -1]).unwrap(),
            vec![qf(1, 2), qf(-1, 2), qf(1, 2)]
        );
        assert_eq!(section_point(&[0, 1]).unwrap(), vec![q(0), q(0), q(1)]);
        let y = vec_sym(&[2, 3, 1]);
        let scaled: Vec<Q> = y.iter().map(|x| x * qf(7, 3)).collect();
        assert_eq!(normalize_to_section(&scaled, 3).unwrap(), normalize_to_section(&y, 3).unwrap());
    }
}
