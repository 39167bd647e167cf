//! Bistellar flips on circuits and the signed identity relating the two
//! sides of a flip.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use super::circuit::{affine_dependence, Circuit};
use super::triangulation::{orientation, triangulation_defect};
use super::{LabelBits, PointConfiguration, Simplex, Triangulation};
use crate::antisym::AntisymChain;
use crate::exactq::{cayley_matrix, nullspace, Q};
use crate::{Error, Result};

/// A flip on `circuit`. The circuit is oriented so its positive cells are
/// the ones present before the flip. Every modified simplex is a cell of
/// the circuit joined with one of the `links`; `cone_labels` are the labels
/// common to all links.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flip {
    pub circuit: Circuit,
    pub links: Vec<Vec<usize>>,
    pub cone_labels: Vec<usize>,
    pub removed: Vec<Simplex>,
    pub inserted: Vec<Simplex>,
}

impl Flip {
    /// Builds the flip from an oriented circuit and its links.
    pub fn from_parts(circuit: Circuit, mut links: Vec<Vec<usize>>) -> Flip {
        links.sort();
        links.dedup();
        let join = |cells: Vec<Simplex>| -> Vec<Simplex> {
            let mut out: Vec<Simplex> = cells
                .iter()
                .flat_map(|c| links.iter().map(move |l| c.union(l)))
                .collect();
            out.sort();
            out
        };
        let removed = join(circuit.positive_cells());
        let inserted = join(circuit.negative_cells());
        let cone_labels = match links.split_first() {
            None => Vec::new(),
            Some((first, rest)) => first
                .iter()
                .copied()
                .filter(|l| rest.iter().all(|r| r.contains(l)))
                .collect(),
        };
        Flip {
            circuit,
            links,
            cone_labels,
            removed,
            inserted,
        }
    }

    /// The inverse flip.
    pub fn reversed(&self) -> Flip {
        Flip::from_parts(self.circuit.reversed(), self.links.clone())
    }
}

/// Per-link outcome of [`verify_flip_identity`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkIdentity {
    pub link: Vec<usize>,
    /// The sign `e` for which the identity holds.
    pub e: i32,
}

/// Record of a verified flip identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipIdentity {
    pub circuit: Circuit,
    pub cone_labels: Vec<usize>,
    pub links: Vec<LinkIdentity>,
}

/// A simplex as an oriented generator: its sorted tuple with the sign of
/// its homogeneous determinant.
pub fn oriented_simplex(config: &PointConfiguration, s: &Simplex) -> AntisymChain<usize> {
    let o = orientation(config, s.labels());
    AntisymChain::from_tuple(s.labels().to_vec(), Q::from_integer(o.into()))
}

/// Sum of the oriented simplices.
pub fn oriented_sum<'a>(
    config: &PointConfiguration,
    simplices: impl IntoIterator<Item = &'a Simplex>,
) -> AntisymChain<usize> {
    let mut c = AntisymChain::new();
    for s in simplices {
        c.add(&oriented_simplex(config, s));
    }
    c
}

/// `sum_i (-1)^i (z_1, .., z_i^, .., z_p, tail)` with 1-based `i`.
pub fn alternating_circuit_sum(z: &[usize], tail: &[usize]) -> AntisymChain<usize> {
    let mut c = AntisymChain::new();
    for i in 0..z.len() {
        let mut t: Vec<usize> = z.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &l)| l).collect();
        t.extend_from_slice(tail);
        let s = if (i + 1) % 2 == 0 { Q::one() } else { -Q::one() };
        c.add_tuple(t, s);
    }
    c
}

/// Checks, link by link, that `e * sum_i (-1)^i (Z - z_i, L)` equals the
/// oriented removed simplices minus the oriented inserted ones.
pub fn verify_flip_identity(config: &PointConfiguration, f: &Flip) -> Result<FlipIdentity> {
    if !f.circuit.check(config) {
        return Err(Error::NotACircuit("stored dependence does not hold".into()));
    }
    let mut out = Vec::new();
    for link in &f.links {
        let lhs = alternating_circuit_sum(&f.circuit.labels, link);
        let on_link = |s: &Simplex| s.contains_all(link);
        let mut rhs = oriented_sum(config, f.removed.iter().filter(|s| on_link(s)));
        rhs.sub(&oriented_sum(config, f.inserted.iter().filter(|s| on_link(s))));
        let e = if lhs == rhs {
            1
        } else if lhs.negated() == rhs {
            -1
        } else {
            return Err(Error::IdentityFailed(format!(
                "flip identity fails on link {link:?}"
            )));
        };
        out.push(LinkIdentity {
            link: link.clone(),
            e,
        });
    }
    Ok(FlipIdentity {
        circuit: f.circuit.clone(),
        cone_labels: f.cone_labels.clone(),
        links: out,
    })
}

/// Links of the cells of one side of `z` in `t`, if every cell of that side
/// has the same nonempty link set.
fn common_links(t: &Triangulation, z: &Circuit) -> Option<Vec<Vec<usize>>> {
    let zs: BTreeSet<usize> = z.labels.iter().copied().collect();
    let mut shared: Option<BTreeSet<Vec<usize>>> = None;
    for cell in z.positive_cells() {
        let links: BTreeSet<Vec<usize>> = t
            .iter()
            .filter(|s| s.contains_all(cell.labels()))
            .map(|s| s.labels().iter().copied().filter(|l| !zs.contains(l)).collect())
            .collect();
        if links.is_empty() {
            return None;
        }
        match &shared {
            None => shared = Some(links),
            Some(prev) if *prev != links => return None,
            _ => {}
        }
    }
    shared.map(|s| s.into_iter().collect())
}

/// All flips applicable to `t`, found from pairs of adjacent simplices.
pub fn supported_flips(config: &PointConfiguration, t: &Triangulation) -> Result<Vec<Flip>> {
    let simplices: Vec<&Simplex> = t.iter().collect();
    let d = config.ambient_dim;
    let mut circuits: BTreeSet<Vec<usize>> = BTreeSet::new();
    // index simplices by their facets to find adjacent pairs
    let mut by_facet: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, s) in simplices.iter().enumerate() {
        for &v in s.labels() {
            by_facet.entry(s.without(v).0).or_default().push(i);
        }
    }
    let mut candidates: Vec<Simplex> = by_facet
        .values()
        .filter(|owners| owners.len() == 2)
        .map(|owners| simplices[owners[0]].union(simplices[owners[1]].labels()))
        .collect();
    // points the triangulation does not use can enter through a circuit
    // inside one simplex plus that point
    let used: LabelBits = simplices.iter().fold(LabelBits::empty(), |mut acc, s| {
        for &l in s.labels() {
            acc.insert(l);
        }
        acc
    });
    for p in (0..config.len()).filter(|&p| !used.contains(p)) {
        for s in &simplices {
            candidates.push(s.union(&[p]));
        }
    }
    for u in candidates {
        if u.labels().len() != d + 2 {
            continue;
        }
        let pts: Vec<Vec<Q>> = u.labels().iter().map(|&l| config.points[l].clone()).collect();
        let kernel = nullspace(&cayley_matrix(&pts));
        if kernel.len() != 1 {
            continue;
        }
        let support: Vec<usize> = u
            .labels()
            .iter()
            .zip(&kernel[0])
            .filter(|(_, c)| !c.is_zero())
            .map(|(&l, _)| l)
            .collect();
        circuits.insert(support);
    }
    let mut flips = Vec::new();
    for labels in circuits {
        let z = affine_dependence(config, &labels)?;
        for side in [z.clone(), z.reversed()] {
            if let Some(links) = common_links(t, &side) {
                flips.push(Flip::from_parts(side, links));
            }
        }
    }
    Ok(flips)
}

/// `(T - removed) + inserted`, checked to be a triangulation.
pub fn apply_flip(config: &PointConfiguration, t: &Triangulation, f: &Flip) -> Result<Triangulation> {
    if let Some(s) = f.removed.iter().find(|s| !t.contains(s)) {
        return Err(Error::FlipNotApplicable(format!(
            "simplex {:?} is not in the triangulation",
            s.labels()
        )));
    }
    let removed: BTreeSet<&Simplex> = f.removed.iter().collect();
    let out = Triangulation::new(
        t.iter()
            .filter(|s| !removed.contains(s))
            .cloned()
            .chain(f.inserted.iter().cloned()),
    );
    if let Some(why) = triangulation_defect(config, &out) {
        return Err(Error::FlipNotApplicable(format!("result is not a triangulation: {why}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::triangulation::is_regular;

    fn square() -> PointConfiguration {
        PointConfiguration::from_int(&[vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]).unwrap()
    }

    fn pyramid() -> PointConfiguration {
        // labels 0..3 are the base square in cyclic order, 4 the apex
        PointConfiguration::from_int(&[
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![1, 1, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
        ])
        .unwrap()
    }

    #[test]
    fn square_flip() {
        let c = square();
        let t = Triangulation::from_lists(&[vec![0, 1, 3], vec![1, 2, 3]]);
        let flips = supported_flips(&c, &t).unwrap();
        assert_eq!(flips.len(), 1);
        let f = &flips[0];
        assert!(f.cone_labels.is_empty());
        let t2 = apply_flip(&c, &t, f).unwrap();
        assert_eq!(t2, Triangulation::from_lists(&[vec![0, 1, 2], vec![0, 2, 3]]));
        assert_eq!(apply_flip(&c, &t2, &f.reversed()).unwrap(), t);
        verify_flip_identity(&c, f).unwrap();
    }

    #[test]
    fn simplex_has_no_flips() {
        let c = PointConfiguration::from_int(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let t = Triangulation::from_lists(&[vec![0, 1, 2]]);
        assert!(supported_flips(&c, &t).unwrap().is_empty());
    }

    #[test]
    fn pyramid_flip_and_identity() {
        let c = pyramid();
        // 1-based labels 1235,1345 become 0124,0234
        let t = Triangulation::from_lists(&[vec![0, 1, 2, 4], vec![0, 2, 3, 4]]);
        let flips = supported_flips(&c, &t).unwrap();
        assert_eq!(flips.len(), 1);
        let f = &flips[0];
        assert_eq!(f.circuit.labels, vec![0, 1, 2, 3]);
        assert_eq!(f.cone_labels, vec![4]);
        let t2 = apply_flip(&c, &t, f).unwrap();
        assert_eq!(t2, Triangulation::from_lists(&[vec![0, 1, 3, 4], vec![1, 2, 3, 4]]));
        let id = verify_flip_identity(&c, f).unwrap();
        assert_eq!(id.links.len(), 1);
        // -[2345]+[1345]-[1245]+[1235], 1-based, as an antisymmetric sum
        let mut expected = AntisymChain::new();
        expected.add_tuple(vec![1, 2, 3, 4], -Q::one());
        expected.add_tuple(vec![0, 2, 3, 4], Q::one());
        expected.add_tuple(vec![0, 1, 3, 4], -Q::one());
        expected.add_tuple(vec![0, 1, 2, 4], Q::one());
        let lhs = alternating_circuit_sum(&f.circuit.labels, &f.cone_labels);
        assert!(lhs == expected || lhs.negated() == expected);
    }

    #[test]
    fn segment_flip_in_triangle() {
        // the midpoint 3 of edge 0-1 of a triangle with apex 2
        let c = PointConfiguration::from_int(&[vec![0, 0], vec![2, 0], vec![0, 2], vec![1, 0]])
            .unwrap();
        let t = Triangulation::from_lists(&[vec![0, 2, 3], vec![1, 2, 3]]);
        let flips = supported_flips(&c, &t).unwrap();
        assert_eq!(flips.len(), 1);
        let f = &flips[0];
        assert_eq!(f.cone_labels, vec![2]);
        verify_flip_identity(&c, f).unwrap();
        let t2 = apply_flip(&c, &t, f).unwrap();
        assert_eq!(t2, Triangulation::from_lists(&[vec![0, 1, 2]]));
        assert!(is_regular(&c, &t2).unwrap().is_some());
    }

    #[test]
    fn apply_rejects_missing_simplices() {
        let c = square();
        let t = Triangulation::from_lists(&[vec![0, 1, 3], vec![1, 2, 3]]);
        let f = supported_flips(&c, &t).unwrap().remove(0);
        assert!(apply_flip(&c, &apply_flip(&c, &t, &f).unwrap(), &f).is_err());
    }
}
