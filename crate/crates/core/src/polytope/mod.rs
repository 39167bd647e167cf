//! Exact combinatorics of labeled point configurations: convex hulls,
//! circuits, regular triangulations and bistellar flips.

pub mod circuit;
pub mod enumerate;
pub mod flip;
pub mod hull;
pub mod lp;
pub mod triangulation;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::exactq::{affine_dim, solve, Matrix, Q};
use crate::{Error, Result};

pub use circuit::{affine_dependence, gkz_two_triangulations, Circuit};
pub use enumerate::{enumerate_regular_triangulations, flip_path};
pub use flip::{apply_flip, supported_flips, verify_flip_identity, Flip, FlipIdentity};
pub use triangulation::{
    is_regular, is_valid_triangulation, lift_triangulation, placing_triangulation,
    LiftingHeights,
};

/// Small fixed-capacity label set used in the inner loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LabelBits(u128);

impl LabelBits {
    pub const CAPACITY: usize = 128;

    pub fn empty() -> Self {
        LabelBits(0)
    }

    pub fn from_labels(labels: &[usize]) -> Self {
        let mut b = Self::empty();
        for &l in labels {
            b.insert(l);
        }
        b
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn and(&self, o: &Self) -> Self {
        LabelBits(self.0 & o.0)
    }

    pub fn is_subset(&self, o: &Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn count(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn labels(&self) -> Vec<usize> {
        (0..Self::CAPACITY).filter(|&i| self.contains(i)).collect()
    }
}

/// Labeled points; label `i` is the point at index `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub ambient_dim: usize,
    #[serde(with = "serde_points")]
    pub points: Vec<Vec<Q>>,
}

pub mod serde_points {
    use super::*;
    use crate::exactq::{q_from_str, q_to_string};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = p.iter().map(|r| r.iter().map(q_to_string).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Q>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|r| {
                r.iter()
                    .map(|s| q_from_str(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

impl PointConfiguration {
    pub fn new(points: Vec<Vec<Q>>) -> Result<Self> {
        let ambient_dim = points
            .first()
            .ok_or_else(|| Error::InvalidInput("empty configuration".into()))?
            .len();
        if points.iter().any(|p| p.len() != ambient_dim) {
            return Err(Error::Dimension("points of mixed ambient dimension".into()));
        }
        if points.len() > LabelBits::CAPACITY {
            return Err(Error::InvalidInput(format!(
                "at most {} points supported",
                LabelBits::CAPACITY
            )));
        }
        Ok(PointConfiguration {
            ambient_dim,
            points,
        })
    }

    pub fn from_int(points: &[Vec<i64>]) -> Result<Self> {
        Self::new(points.iter().map(|p| crate::exactq::to_q(p)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn affine_dim(&self) -> usize {
        affine_dim(&self.points).expect("configuration is nonempty")
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == self.ambient_dim
    }

    pub(crate) fn require_full_dimensional(&self) -> Result<()> {
        if self.is_full_dimensional() {
            Ok(())
        } else {
            Err(Error::Degenerate(format!(
                "affine dimension {} in ambient dimension {}",
                self.affine_dim(),
                self.ambient_dim
            )))
        }
    }

    /// Homogenized point `(1, x)`.
    pub fn homogeneous(&self, label: usize) -> Vec<Q> {
        let mut v = Vec::with_capacity(self.ambient_dim + 1);
        v.push(Q::one());
        v.extend(self.points[label].iter().cloned());
        v
    }

    /// Sub-configuration on the given labels, relabeled `0..labels.len()`.
    pub fn restrict(&self, labels: &[usize]) -> Result<Self> {
        Self::new(labels.iter().map(|&l| self.points[l].clone()).collect())
    }

    /// Re-expresses the points in affine coordinates of their own span, so
    /// the result is full-dimensional. The frame is the first affinely
    /// independent subset in label order.
    pub fn project_to_span(&self) -> Result<Self> {
        let origin = self.points[0].clone();
        let mut frame: Vec<Vec<Q>> = Vec::new();
        for p in &self.points[1..] {
            let d: Vec<Q> = p.iter().zip(&origin).map(|(a, b)| a - b).collect();
            let mut trial = frame.clone();
            trial.push(d.clone());
            if crate::exactq::rank(&Matrix::from_rows(&trial)) == trial.len() {
                frame = trial;
            }
        }
        if frame.is_empty() {
            return Err(Error::Degenerate("all points coincide".into()));
        }
        let basis = Matrix::from_cols(&frame);
        let pts = self
            .points
            .iter()
            .map(|p| {
                let d: Vec<Q> = p.iter().zip(&origin).map(|(a, b)| a - b).collect();
                solve(&basis, &d).expect("point lies in the affine span")
            })
            .collect();
        Self::new(pts)
    }
}

/// Sorted vertex labels of a simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(pub Vec<usize>);

impl Simplex {
    pub fn new(mut labels: Vec<usize>) -> Self {
        labels.sort_unstable();
        labels.dedup();
        Simplex(labels)
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn bits(&self) -> LabelBits {
        LabelBits::from_labels(&self.0)
    }

    pub fn contains_all(&self, labels: &[usize]) -> bool {
        labels.iter().all(|l| self.0.binary_search(l).is_ok())
    }

    pub fn without(&self, label: usize) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&l| l != label).collect())
    }

    pub fn union(&self, other: &[usize]) -> Simplex {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Simplex::new(v)
    }
}

/// A set of full-dimensional simplices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Triangulation {
    pub simplices: BTreeSet<Simplex>,
}

impl Triangulation {
    pub fn new(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        Triangulation {
            simplices: simplices.into_iter().collect(),
        }
    }

    pub fn from_lists(lists: &[Vec<usize>]) -> Self {
        Self::new(lists.iter().map(|l| Simplex::new(l.clone())))
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    /// Relabels through `map` (e.g. from local facet labels to tile labels).
    pub fn relabel(&self, map: &[usize]) -> Self {
        Self::new(
            self.simplices
                .iter()
                .map(|s| Simplex::new(s.0.iter().map(|&l| map[l]).collect())),
        )
    }
}

/// A facet of the convex hull: the labels on it and an inward functional
/// `f0 + f . x >= 0` that vanishes exactly on them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullFacet {
    pub labels: Vec<usize>,
    #[serde(with = "crate::exactq::serde_qvec")]
    pub functional: Vec<Q>,
}

impl HullFacet {
    pub fn eval(&self, x: &[Q]) -> Q {
        let mut v = self.functional[0].clone();
        for (a, b) in self.functional[1..].iter().zip(x) {
            if !a.is_zero() {
                v += a * b;
            }
        }
        v
    }
}

/// All facets of the hull of a full-dimensional configuration, sorted by
/// label set.
pub fn convex_hull_facets(config: &PointConfiguration) -> Result<Vec<HullFacet>> {
    config.require_full_dimensional()?;
    let rays: Vec<Vec<Q>> = (0..config.len()).map(|i| config.homogeneous(i)).collect();
    let mut out: Vec<HullFacet> = hull::cone_facets(&rays)?
        .into_iter()
        .map(|(f, z)| HullFacet {
            labels: z.labels(),
            functional: f.into_iter().map(Q::from_integer).collect(),
        })
        .collect();
    out.sort_by(|a, b| a.labels.cmp(&b.labels));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn square() -> PointConfiguration {
        PointConfiguration::from_int(&[vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]).unwrap()
    }

    #[test]
    fn hull_of_triangle_and_square() {
        let tri = PointConfiguration::from_int(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let f = convex_hull_facets(&tri).unwrap();
        assert_eq!(f.len(), 3);
        let sq = square();
        let f = convex_hull_facets(&sq).unwrap();
        assert_eq!(f.len(), 4);
        let labels: Vec<Vec<usize>> = f.iter().map(|x| x.labels.clone()).collect();
        assert_eq!(labels, vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]);
        for facet in &f {
            for (i, p) in sq.points.iter().enumerate() {
                let v = facet.eval(p);
                assert!(v >= Q::zero());
                assert_eq!(v.is_zero(), facet.labels.contains(&i));
            }
        }
    }

    #[test]
    fn hull_rejects_degenerate() {
        let line = PointConfiguration::from_int(&[vec![0, 0], vec![1, 1], vec![2, 2]]).unwrap();
        assert!(matches!(convex_hull_facets(&line), Err(Error::Degenerate(_))));
    }

    #[test]
    fn interior_points_are_on_no_facet() {
        let c = PointConfiguration::from_int(&[
            vec![0, 0],
            vec![4, 0],
            vec![0, 4],
            vec![1, 1],
            vec![2, 0],
        ])
        .unwrap();
        let f = convex_hull_facets(&c).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.iter().all(|x| !x.labels.contains(&3)));
        assert!(f.iter().any(|x| x.labels == vec![0, 1, 4]));
    }

    #[test]
    fn projection_keeps_affine_structure() {
        let c = PointConfiguration::from_int(&[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, -1],
        ])
        .unwrap();
        assert!(!c.is_full_dimensional());
        let p = c.project_to_span().unwrap();
        assert_eq!(p.ambient_dim, 2);
        assert!(p.is_full_dimensional());
        assert_eq!(convex_hull_facets(&p).unwrap().len(), 4);
    }
}
