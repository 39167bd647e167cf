use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{PointConfiguration, Simplex};
use crate::exactq::{cayley_matrix, nullspace, primitive_normalize, Q};
use crate::{Error, Result};

/// Minimal affinely dependent label set with the sign partition of its
/// unique affine dependence. The dependence is primitive and integral,
/// aligned with `labels`, and oriented so the smallest label is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Circuit {
    pub labels: Vec<usize>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    pub dependence: Vec<i64>,
}

impl Circuit {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Same circuit with the roles of the two parts exchanged.
    pub fn reversed(&self) -> Circuit {
        Circuit {
            labels: self.labels.clone(),
            positive: self.negative.clone(),
            negative: self.positive.clone(),
            dependence: self.dependence.iter().map(|x| -x).collect(),
        }
    }

    /// Cells `Z - w` for `w` in the positive part.
    pub fn positive_cells(&self) -> Vec<Simplex> {
        self.positive
            .iter()
            .map(|&w| Simplex::new(self.labels.iter().copied().filter(|&l| l != w).collect()))
            .collect()
    }

    pub fn negative_cells(&self) -> Vec<Simplex> {
        self.reversed().positive_cells()
    }

    /// Checks the defining properties against the configuration.
    pub fn check(&self, config: &PointConfiguration) -> bool {
        if self.labels.len() != self.dependence.len() || self.dependence.contains(&0) {
            return false;
        }
        let dim = config.ambient_dim;
        let mut acc = vec![Q::zero(); dim + 1];
        for (&l, &c) in self.labels.iter().zip(&self.dependence) {
            for (a, x) in acc.iter_mut().zip(config.homogeneous(l)) {
                *a += x * Q::from_integer(c.into());
            }
        }
        let pos: Vec<usize> = self
            .labels
            .iter()
            .zip(&self.dependence)
            .filter(|(_, &c)| c > 0)
            .map(|(&l, _)| l)
            .collect();
        acc.iter().all(|x| x.is_zero()) && pos == self.positive
    }
}

/// The circuit formed by `labels`, which must carry exactly one affine
/// dependence (up to scale) with full support.
pub fn affine_dependence(config: &PointConfiguration, labels: &[usize]) -> Result<Circuit> {
    let mut labels = labels.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let pts: Vec<Vec<Q>> = labels.iter().map(|&l| config.points[l].clone()).collect();
    let kernel = nullspace(&cayley_matrix(&pts));
    match kernel.len() {
        0 => return Err(Error::NotACircuit("points are affinely independent".into())),
        1 => {}
        k => return Err(Error::NotACircuit(format!("{k} independent affine dependencies"))),
    }
    let mut dep = primitive_normalize(&kernel[0])?;
    if dep.contains(&0) {
        return Err(Error::NotACircuit(
            "dependence does not involve every point".into(),
        ));
    }
    if dep[0] < 0 {
        dep.iter_mut().for_each(|c| *c = -*c);
    }
    let positive = labels
        .iter()
        .zip(&dep)
        .filter(|(_, &c)| c > 0)
        .map(|(&l, _)| l)
        .collect();
    let negative = labels
        .iter()
        .zip(&dep)
        .filter(|(_, &c)| c < 0)
        .map(|(&l, _)| l)
        .collect();
    Ok(Circuit {
        labels,
        positive,
        negative,
        dependence: dep,
    })
}

/// The two triangulations of the hull of a circuit.
pub fn gkz_two_triangulations(z: &Circuit) -> (Vec<Simplex>, Vec<Simplex>) {
    let mut plus = z.positive_cells();
    let mut minus = z.negative_cells();
    plus.sort();
    minus.sort();
    (plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_triple() {
        let c = PointConfiguration::from_int(&[vec![0], vec![1], vec![2]]).unwrap();
        let z = affine_dependence(&c, &[0, 1, 2]).unwrap();
        assert_eq!(z.positive, vec![0, 2]);
        assert_eq!(z.negative, vec![1]);
        assert_eq!(z.dependence, vec![1, -2, 1]);
        assert!(z.check(&c));
        let (plus, minus) = gkz_two_triangulations(&z);
        assert_eq!(plus, vec![Simplex(vec![0, 1]), Simplex(vec![1, 2])]);
        assert_eq!(minus, vec![Simplex(vec![0, 2])]);
    }

    #[test]
    fn square_circuit() {
        let c = PointConfiguration::from_int(&[vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]])
            .unwrap();
        let z = affine_dependence(&c, &[0, 1, 2, 3]).unwrap();
        assert_eq!(z.positive, vec![0, 2]);
        assert_eq!(z.negative, vec![1, 3]);
        let (plus, minus) = gkz_two_triangulations(&z);
        assert_eq!(plus, vec![Simplex(vec![0, 1, 3]), Simplex(vec![1, 2, 3])]);
        assert_eq!(minus, vec![Simplex(vec![0, 1, 2]), Simplex(vec![0, 2, 3])]);
    }

    #[test]
    fn non_circuits_rejected() {
        let c = PointConfiguration::from_int(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0]])
            .unwrap();
        assert!(affine_dependence(&c, &[0, 1, 2]).is_err());
        // 0,1,3 collinear: the dependence skips point 2
        assert!(affine_dependence(&c, &[0, 1, 2, 3]).is_err());
        let line = PointConfiguration::from_int(&[vec![0], vec![1], vec![2], vec![3]]).unwrap();
        assert!(affine_dependence(&line, &[0, 1, 2, 3]).is_err());
    }
}
