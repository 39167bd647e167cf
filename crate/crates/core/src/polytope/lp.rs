//! Exact two-phase simplex over the rationals.
//!
//! Standard form: maximize `c.x` subject to `A x = b`, `x >= 0`. Bland's
//! rule is used throughout, so the method terminates on degenerate
//! problems at the cost of speed; the problems solved here are small.

use num_traits::{One, Signed, Zero};

use crate::exactq::{Matrix, Q};

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Q>, value: Q },
}

struct Tableau {
    // rows 0..m are constraints, last column is the rhs
    t: Vec<Vec<Q>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for v in self.t[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let prow = self.t[row].clone();
        for (r, line) in self.t.iter_mut().enumerate() {
            if r == row || line[col].is_zero() {
                continue;
            }
            let f = line[col].clone();
            for (c, p) in prow.iter().enumerate() {
                if !p.is_zero() {
                    line[c] -= p * &f;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Maximizes `obj` (length `ncols`) over the current feasible basis,
    /// restricted to columns where `allowed` holds.
    fn optimize(&mut self, obj: &[Q], allowed: &dyn Fn(usize) -> bool) -> bool {
        let m = self.basis.len();
        loop {
            // reduced cost r_j = obj_j - sum_i obj_{basis_i} t_ij
            let entering = (0..self.ncols).filter(|&j| allowed(j)).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut r = obj[j].clone();
                for i in 0..m {
                    let b = self.basis[i];
                    if !obj[b].is_zero() && !self.t[i][j].is_zero() {
                        r -= &obj[b] * &self.t[i][j];
                    }
                }
                r.is_positive()
            });
            let Some(j) = entering else { return true };
            let rhs = self.ncols;
            let mut best: Option<(usize, Q)> = None;
            for i in 0..m {
                if self.t[i][j].is_positive() {
                    let ratio = &self.t[i][rhs] / &self.t[i][j];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((i, _)) => self.pivot(i, j),
            }
        }
    }
}

/// Maximize `c.x` subject to `a x = b`, `x >= 0`.
pub fn maximize(a: &Matrix, b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);
    // columns: n originals, m artificials, then rhs
    let ncols = n + m;
    let mut t = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![Q::zero(); ncols + 1];
        for j in 0..n {
            row[j] = if flip { -a[(i, j)].clone() } else { a[(i, j)].clone() };
        }
        row[n + i] = Q::one();
        row[ncols] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        ncols,
    };
    // phase one: maximize -(sum of artificials)
    let mut obj1 = vec![Q::zero(); ncols];
    for v in obj1.iter_mut().skip(n) {
        *v = -Q::one();
    }
    tab.optimize(&obj1, &|_| true);
    let infeas: Q = (0..m)
        .filter(|&i| tab.basis[i] >= n)
        .map(|i| tab.t[i][ncols].clone())
        .fold(Q::zero(), |a, x| a + x);
    if infeas.is_positive() {
        return LpOutcome::Infeasible;
    }
    // drive zero-level artificials out of the basis where possible
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                tab.pivot(i, j);
            }
        }
    }
    let mut obj2 = vec![Q::zero(); ncols];
    obj2[..n].clone_from_slice(c);
    if !tab.optimize(&obj2, &|j| j < n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for i in 0..m {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.t[i][ncols].clone();
        }
    }
    let value = c.iter().zip(&x).fold(Q::zero(), |a, (ci, xi)| a + ci * xi);
    LpOutcome::Optimal { x, value }
}

/// Some `y` with `g y >= h` componentwise (free variables), or `None`.
pub fn feasible_point(g: &Matrix, h: &[Q]) -> Option<Vec<Q>> {
    let m = g.rows();
    let n = g.cols();
    // y = u - w, g u - g w - s = h
    let mut a = Matrix::zeros(m, 2 * n + m);
    for i in 0..m {
        for j in 0..n {
            a[(i, j)] = g[(i, j)].clone();
            a[(i, n + j)] = -g[(i, j)].clone();
        }
        a[(i, 2 * n + i)] = -Q::one();
    }
    let c = vec![Q::zero(); 2 * n + m];
    match maximize(&a, h, &c) {
        LpOutcome::Optimal { x, .. } => Some((0..n).map(|j| &x[j] - &x[n + j]).collect()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::{q, qf};

    #[test]
    fn small_lp() {
        // max x + y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = Matrix::from_int_rows(&[vec![1, 2, 1, 0], vec![3, 1, 0, 1]]);
        let out = maximize(&a, &[q(4), q(6)], &[q(1), q(1), q(0), q(0)]);
        match out {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, qf(14, 5));
                assert_eq!(x[0], qf(8, 5));
                assert_eq!(x[1], qf(6, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = Matrix::from_int_rows(&[vec![1, 1]]);
        assert_eq!(maximize(&a, &[q(-1)], &[q(0), q(0)]), LpOutcome::Infeasible);
        let a = Matrix::from_int_rows(&[vec![1, -1]]);
        assert_eq!(maximize(&a, &[q(0)], &[q(1), q(0)]), LpOutcome::Unbounded);
    }

    #[test]
    fn strict_system() {
        // y1 - y2 >= 1 and y2 - y1 >= 1 is infeasible
        let g = Matrix::from_int_rows(&[vec![1, -1], vec![-1, 1]]);
        assert!(feasible_point(&g, &[q(1), q(1)]).is_none());
        let g = Matrix::from_int_rows(&[vec![1, -1], vec![0, 1]]);
        let y = feasible_point(&g, &[q(1), q(1)]).unwrap();
        assert!(&y[0] - &y[1] >= q(1) && y[1] >= q(1));
    }
}
