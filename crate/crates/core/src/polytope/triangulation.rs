//! Triangulations of full-dimensional configurations: placing, lifting,
//! validity and regularity.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::lp::{feasible_point, maximize, LpOutcome};
use super::{hull, LabelBits, PointConfiguration, Simplex, Triangulation};
use crate::exactq::{det, solve, Matrix, Q};
use crate::{Error, Result};

/// One height per configuration point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingHeights {
    #[serde(with = "crate::exactq::serde_qvec")]
    pub heights: Vec<Q>,
}

fn homogeneous_matrix(config: &PointConfiguration, labels: &[usize]) -> Matrix {
    Matrix::from_rows(&labels.iter().map(|&l| config.homogeneous(l)).collect::<Vec<_>>())
}

/// Determinant of the homogenized vertex rows in the given order; its sign
/// is the orientation of the ordered simplex and its absolute value is
/// `dim!` times the volume.
pub fn signed_volume(config: &PointConfiguration, ordered: &[usize]) -> Q {
    det(&homogeneous_matrix(config, ordered)).expect("square by construction")
}

pub fn orientation(config: &PointConfiguration, ordered: &[usize]) -> i32 {
    crate::exactq::sign(&signed_volume(config, ordered))
}

/// Total normalized volume (`dim!` times Euclidean) of a set of simplices.
pub fn total_volume(config: &PointConfiguration, t: &Triangulation) -> Q {
    t.iter()
        .map(|s| signed_volume(config, s.labels()).abs())
        .fold(Q::zero(), |a, b| a + b)
}

/// Affine coordinates of `p` with respect to the simplex vertices, if `p` is
/// in their affine span.
fn barycentric(config: &PointConfiguration, simplex: &[usize], p: &[Q]) -> Option<Vec<Q>> {
    let cols: Vec<Vec<Q>> = simplex.iter().map(|&l| config.homogeneous(l)).collect();
    let mut rhs = vec![Q::one()];
    rhs.extend(p.iter().cloned());
    solve(&Matrix::from_cols(&cols), &rhs)
}

/// Placing triangulation: the first affinely independent points in `order`
/// form the initial simplex and every later point is coned to the boundary
/// facets it sees strictly. The witness heights certify regularity.
pub fn placing_triangulation(
    config: &PointConfiguration,
    order: &[usize],
) -> Result<(Triangulation, LiftingHeights)> {
    let t = placing_simplices(config, order)?;
    let h = is_regular(config, &t)?.ok_or_else(|| {
        Error::InvalidTriangulation("placing triangulation failed its regularity check".into())
    })?;
    Ok((t, h))
}

pub(crate) fn placing_simplices(
    config: &PointConfiguration,
    order: &[usize],
) -> Result<Triangulation> {
    config.require_full_dimensional()?;
    let d = config.ambient_dim;
    let mut seen = vec![false; config.len()];
    for &l in order {
        if l >= config.len() || std::mem::replace(&mut seen[l], true) {
            return Err(Error::InvalidInput(format!("bad placing order at label {l}")));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidInput("placing order must list every label".into()));
    }
    let mut initial: Vec<usize> = Vec::new();
    for &l in order {
        let mut trial: Vec<Vec<Q>> = initial.iter().map(|&i| config.points[i].clone()).collect();
        trial.push(config.points[l].clone());
        if crate::exactq::affine_dim(&trial)? == trial.len() - 1 {
            initial.push(l);
            if initial.len() == d + 1 {
                break;
            }
        }
    }
    let mut simplices: Vec<Vec<usize>> = vec![initial.clone()];
    for &p in order.iter().filter(|l| !initial.contains(l)) {
        // boundary facets: d-subsets lying in exactly one simplex
        let mut faces: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
        for (si, s) in simplices.iter().enumerate() {
            for &o in s {
                let mut f: Vec<usize> = s.iter().copied().filter(|&x| x != o).collect();
                f.sort_unstable();
                faces
                    .entry(f)
                    .and_modify(|e| e.0 = usize::MAX)
                    .or_insert((si, o));
            }
        }
        let mut added = Vec::new();
        for (f, (si, o)) in faces {
            if si == usize::MAX {
                continue;
            }
            let mut with_o = f.clone();
            with_o.push(o);
            let mut with_p = f.clone();
            with_p.push(p);
            let so = orientation(config, &with_o);
            let sp = orientation(config, &with_p);
            if sp != 0 && sp == -so {
                added.push(with_p);
            }
        }
        simplices.extend(added);
    }
    Ok(Triangulation::new(simplices.into_iter().map(Simplex::new)))
}

/// Triangulation by the lower faces of the lifted configuration. Heights
/// that put a lifted point on a lower facet without being one of its
/// vertices (non-simplicial lower facet) are rejected.
pub fn lift_triangulation(config: &PointConfiguration, h: &LiftingHeights) -> Result<Triangulation> {
    config.require_full_dimensional()?;
    if h.heights.len() != config.len() {
        return Err(Error::InvalidInput("one height per point required".into()));
    }
    let d = config.ambient_dim;
    let mut rays: Vec<Vec<Q>> = (0..config.len())
        .map(|i| {
            let mut r = config.homogeneous(i);
            r.push(h.heights[i].clone());
            r
        })
        .collect();
    let mut up = vec![Q::zero(); d + 2];
    up[d + 1] = Q::one();
    rays.push(up);
    let upward = config.len();
    let mut out = Vec::new();
    for (f, zeros) in hull::cone_facets(&rays)? {
        // lower facets have a positive height coefficient
        if !f[d + 1].is_positive() || zeros.contains(upward) {
            continue;
        }
        let labels = zeros.labels();
        if labels.len() != d + 1 {
            return Err(Error::NotGeneric);
        }
        out.push(Simplex::new(labels));
    }
    Ok(Triangulation::new(out))
}

/// Checks that `a` and `b` meet exactly in the face spanned by their
/// common vertices.
fn intersect_properly(config: &PointConfiguration, a: &[usize], b: &[usize]) -> bool {
    let common: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
    let d = config.ambient_dim;
    if common.len() == d {
        // shared facet: the two apexes must be strictly on opposite sides
        let mut fa = common.clone();
        fa.push(*a.iter().find(|x| !common.contains(x)).unwrap());
        let mut fb = common.clone();
        fb.push(*b.iter().find(|x| !common.contains(x)).unwrap());
        let (sa, sb) = (orientation(config, &fa), orientation(config, &fb));
        return sa != 0 && sa == -sb;
    }
    // max sum of non-common weights over points of conv(a) = conv(b)
    let (ka, kb) = (a.len(), b.len());
    let mut m = Matrix::zeros(d + 2, ka + kb);
    for (j, &l) in a.iter().enumerate() {
        for i in 0..d {
            m[(i, j)] = config.points[l][i].clone();
        }
        m[(d, j)] = Q::one();
    }
    for (j, &l) in b.iter().enumerate() {
        for i in 0..d {
            m[(i, ka + j)] = -config.points[l][i].clone();
        }
        m[(d + 1, ka + j)] = Q::one();
    }
    let mut rhs = vec![Q::zero(); d + 2];
    rhs[d] = Q::one();
    rhs[d + 1] = Q::one();
    let mut c = vec![Q::zero(); ka + kb];
    for (j, l) in a.iter().enumerate() {
        if !common.contains(l) {
            c[j] = Q::one();
        }
    }
    match maximize(&m, &rhs, &c) {
        LpOutcome::Infeasible => true,
        LpOutcome::Optimal { value, .. } => value.is_zero(),
        LpOutcome::Unbounded => unreachable!("bounded by the simplex constraints"),
    }
}

/// Explains why `t` fails to be a triangulation of the configuration.
pub fn triangulation_defect(config: &PointConfiguration, t: &Triangulation) -> Option<String> {
    if !config.is_full_dimensional() {
        return Some("configuration is not full-dimensional".into());
    }
    let d = config.ambient_dim;
    if t.is_empty() {
        return Some("no simplices".into());
    }
    for s in t.iter() {
        if s.labels().len() != d + 1 || s.labels().iter().any(|&l| l >= config.len()) {
            return Some(format!("{:?} is not a full-dimensional simplex of the configuration", s.0));
        }
        if signed_volume(config, s.labels()).is_zero() {
            return Some(format!("{:?} is degenerate", s.0));
        }
    }
    let hull_volume = match placing_simplices(config, &(0..config.len()).collect::<Vec<_>>()) {
        Ok(p) => total_volume(config, &p),
        Err(e) => return Some(e.to_string()),
    };
    if total_volume(config, t) != hull_volume {
        return Some("simplex volumes do not add up to the hull volume".into());
    }
    let list: Vec<&Simplex> = t.iter().collect();
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            if !intersect_properly(config, list[i].labels(), list[j].labels()) {
                return Some(format!(
                    "{:?} and {:?} do not meet in a common face",
                    list[i].0, list[j].0
                ));
            }
        }
    }
    None
}

pub fn is_valid_triangulation(config: &PointConfiguration, t: &Triangulation) -> bool {
    triangulation_defect(config, t).is_none()
}

/// Witness heights iff `t` is regular: for every simplex and every point
/// off it, the lifted point lies strictly above the affine function
/// interpolating the heights on the simplex. Strictness is encoded as a
/// margin of one.
pub fn is_regular(config: &PointConfiguration, t: &Triangulation) -> Result<Option<LiftingHeights>> {
    if let Some(why) = triangulation_defect(config, t) {
        return Err(Error::InvalidTriangulation(why));
    }
    let n = config.len();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for s in t.iter() {
        let bits: LabelBits = s.bits();
        for p in (0..n).filter(|&p| !bits.contains(p)) {
            let lambda = barycentric(config, s.labels(), &config.points[p])
                .expect("full-dimensional simplex spans");
            let mut row = vec![Q::zero(); n];
            row[p] = Q::one();
            for (k, &v) in s.labels().iter().enumerate() {
                row[v] -= &lambda[k];
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Ok(Some(LiftingHeights {
            heights: vec![Q::zero(); n],
        }));
    }
    let g = Matrix::from_rows(&rows);
    let ones = vec![Q::one(); rows.len()];
    Ok(feasible_point(&g, &ones).map(|heights| LiftingHeights { heights }))
}
