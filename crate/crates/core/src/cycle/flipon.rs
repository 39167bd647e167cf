//! Flipons from flip paths between triangulations of a facet, and the
//! coned chain of secondary flipons with its error term.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::antisym::AntisymChain;
use crate::cosharbly::{is_degenerate_points, is_flipon};
use crate::exactq::{rank, to_q, Matrix, Q};
use crate::polytope::flip::{alternating_circuit_sum, oriented_sum, LinkIdentity};
use crate::polytope::{flip_path, verify_flip_identity, Flip, PointConfiguration, Triangulation};
use crate::sharbly::SharblyChain;
use crate::voronoi::Tile;
use crate::{Error, IVec, Result};

/// One flip seen as a flipon: the circuit joined with each of its links.
/// The chain form is `sum_L e_L (Z, L)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flipon {
    pub circuit: Vec<usize>,
    pub links: Vec<LinkIdentity>,
    /// Vectors of the labels, when the configuration comes from a tile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<IVec>>,
}

/// A `d`-tuple whose first `p` entries form the circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FliponTerm<L> {
    pub tuple: Vec<L>,
    pub p: usize,
    pub coeff: Q,
}

impl Flipon {
    pub fn circuit_size(&self) -> usize {
        self.circuit.len()
    }

    pub fn label_terms(&self) -> Vec<FliponTerm<usize>> {
        self.links
            .iter()
            .map(|l| {
                let mut tuple = self.circuit.clone();
                tuple.extend_from_slice(&l.link);
                FliponTerm {
                    tuple,
                    p: self.circuit.len(),
                    coeff: Q::from_integer(l.e.into()),
                }
            })
            .collect()
    }

    /// Terms as vector tuples; `None` without vectors.
    pub fn vector_terms(&self) -> Option<Vec<FliponTerm<IVec>>> {
        let vs = self.vectors.as_ref()?;
        Some(
            self.label_terms()
                .into_iter()
                .map(|t| FliponTerm {
                    tuple: t.tuple.iter().map(|&l| vs[l].clone()).collect(),
                    p: t.p,
                    coeff: t.coeff,
                })
                .collect(),
        )
    }

    /// The sharbly chain `sum_L e_L [Z, L]`.
    pub fn chain(&self) -> Result<Option<SharblyChain>> {
        let Some(terms) = self.vector_terms() else { return Ok(None) };
        let mut c = SharblyChain::new();
        for t in terms {
            c.add_vectors(&t.tuple, t.coeff)?;
        }
        Ok(Some(c))
    }

    /// Every term is degenerate in the section and spans `Q^n`.
    pub fn check_predicate(&self) -> Result<bool> {
        let Some(terms) = self.vector_terms() else { return Ok(false) };
        for t in terms {
            let n = t.tuple[0].len();
            let rows: Vec<Vec<Q>> = t.tuple.iter().map(|v| to_q(v)).collect();
            if !is_flipon(&t.tuple)? || rank(&Matrix::from_rows(&rows)) < n {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Flipons along a shortest regular flip path from `a` to `b`, after
/// checking that their partial boundaries telescope to `a - b`.
pub fn flipons_for_config(
    config: &PointConfiguration,
    a: &Triangulation,
    b: &Triangulation,
    budget: usize,
) -> Result<(Vec<Flip>, Vec<Flipon>)> {
    let path = flip_path(config, a, b, budget)?;
    let mut total = AntisymChain::new();
    let mut flipons = Vec::new();
    for f in &path {
        let id = verify_flip_identity(config, f)?;
        for l in &id.links {
            total.add(&alternating_circuit_sum(&f.circuit.labels, &l.link).scaled(&Q::from_integer(l.e.into())));
        }
        flipons.push(Flipon {
            circuit: f.circuit.labels.clone(),
            links: id.links,
            vectors: None,
        });
    }
    let mut diff = oriented_sum(config, a.iter());
    diff.sub(&oriented_sum(config, b.iter()));
    if total != diff {
        return Err(Error::IdentityFailed("flip path does not telescope".into()));
    }
    Ok((path, flipons))
}

/// Flipons on facet `facet` (ray labels of `tile`) between two
/// triangulations given in the tile's labels.
pub fn flipons_for_facet(
    tile: &Tile,
    facet: &[usize],
    a: &Triangulation,
    b: &Triangulation,
    budget: usize,
) -> Result<Vec<Flipon>> {
    let cfg = tile.section_configuration(facet)?;
    let local = |t: &Triangulation| -> Result<Triangulation> {
        let lists = t
            .iter()
            .map(|s| {
                s.labels()
                    .iter()
                    .map(|g| {
                        facet.iter().position(|x| x == g).ok_or_else(|| {
                            Error::InvalidInput(format!("label {g} is not on the facet"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Triangulation::from_lists(&lists))
    };
    let (_, flipons) = flipons_for_config(&cfg, &local(a)?, &local(b)?, budget)?;
    let global = |ls: &[usize]| -> Vec<usize> { ls.iter().map(|&l| facet[l]).collect() };
    let out: Vec<Flipon> = flipons
        .into_iter()
        .map(|f| Flipon {
            circuit: global(&f.circuit),
            links: f
                .links
                .iter()
                .map(|l| LinkIdentity {
                    link: global(&l.link),
                    e: l.e,
                })
                .collect(),
            vectors: Some(tile.vectors().to_vec()),
        })
        .collect();
    for f in &out {
        if !f.check_predicate()? {
            return Err(Error::Degenerate("a flipon term fails the flipon predicate".into()));
        }
    }
    Ok(out)
}

/// The chains `Omega`, `Psi` and the pieces `I`, `II`, `III` of `d Psi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondaryFlipons<L: Ord> {
    pub x: L,
    pub omega: AntisymChain<L>,
    pub psi: AntisymChain<L>,
    pub i_term: AntisymChain<L>,
    pub ii_term: AntisymChain<L>,
    pub iii_term: AntisymChain<L>,
}

fn pm(k: usize) -> Q {
    if k.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

fn without<L: Clone>(t: &[L], skip: &[usize]) -> Vec<L> {
    t.iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, v)| v.clone())
        .collect()
}

/// Symbolic expansion; positions are 1-based in the signs.
pub fn secondary_chains<L: Ord + Clone>(terms: &[FliponTerm<L>], x: &L) -> SecondaryFlipons<L> {
    let mut psi = AntisymChain::new();
    let mut i_term = AntisymChain::new();
    let mut ii_term = AntisymChain::new();
    let mut iii_term = AntisymChain::new();
    for t in terms {
        let d = t.tuple.len();
        let p = t.p;
        for j in p + 1..=d {
            let cj = &t.coeff * pm(j);
            psi.add_tuple(without(&t.tuple, &[j - 1]), cj.clone());
            for i in 1..=p {
                i_term.add_tuple(without(&t.tuple, &[i - 1, j - 1]), &cj * pm(i));
            }
            for i in p + 1..j {
                ii_term.add_tuple(without(&t.tuple, &[i - 1, j - 1]), &cj * pm(i));
            }
            if j < d {
                for i in j + 1..=d {
                    iii_term.add_tuple(without(&t.tuple, &[j - 1, i - 1]), &cj * pm(i - 1));
                }
            }
        }
    }
    SecondaryFlipons {
        x: x.clone(),
        omega: psi.cone(x),
        psi,
        i_term,
        ii_term,
        iii_term,
    }
}

impl<L: Ord + Clone> SecondaryFlipons<L> {
    /// `d Omega = Psi + [x, I] + [x, II] + [x, III]`.
    pub fn identity_holds(&self) -> bool {
        let mut rhs = self.psi.clone();
        rhs.add(&self.i_term.cone(&self.x));
        rhs.add(&self.ii_term.cone(&self.x));
        rhs.add(&self.iii_term.cone(&self.x));
        self.omega.boundary() == rhs
    }

    pub fn ii_iii_cancel(&self) -> bool {
        let mut s = self.ii_term.clone();
        s.add(&self.iii_term);
        s.is_zero()
    }
}

impl SecondaryFlipons<IVec> {
    pub fn omega_sharbly(&self) -> Result<SharblyChain> {
        to_sharbly(&self.omega)
    }

    pub fn psi_sharbly(&self) -> Result<SharblyChain> {
        to_sharbly(&self.psi)
    }
}

fn to_sharbly(c: &AntisymChain<IVec>) -> Result<SharblyChain> {
    let mut out = SharblyChain::new();
    for (k, v) in c.iter() {
        out.add_vectors(k, v.clone())?;
    }
    Ok(out)
}

/// Secondary flipons over vectors; every non-vanishing summand of `Omega`
/// must satisfy the flipon predicate.
pub fn secondary_flipons(terms: &[FliponTerm<IVec>], x: &IVec) -> Result<SecondaryFlipons<IVec>> {
    if x.iter().all(|&c| c == 0) {
        return Err(Error::ZeroVector);
    }
    let s = secondary_chains(terms, x);
    for (b, _) in s.omega_sharbly()?.iter() {
        if !is_flipon(&b.vectors)? {
            return Err(Error::Degenerate(format!("{:?} is not a flipon", b.vectors)));
        }
    }
    Ok(s)
}

/// Secondary flipons over the labels of a point configuration, checked by
/// affine rank.
pub fn secondary_flipons_in(
    config: &PointConfiguration,
    terms: &[FliponTerm<usize>],
    x: usize,
) -> Result<SecondaryFlipons<usize>> {
    let s = secondary_chains(terms, &x);
    for (k, _) in s.omega.iter() {
        let pts: Vec<Vec<Q>> = k.iter().map(|&l| config.points[l].clone()).collect();
        if !is_degenerate_points(&pts)? {
            return Err(Error::Degenerate(format!("{k:?} is not degenerate")));
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::q;

    fn pyramid() -> PointConfiguration {
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
    fn pyramid_flipon() {
        let cfg = pyramid();
        let a = Triangulation::from_lists(&[vec![0, 1, 2, 4], vec![0, 2, 3, 4]]);
        let b = Triangulation::from_lists(&[vec![0, 1, 3, 4], vec![1, 2, 3, 4]]);
        let (path, fl) = flipons_for_config(&cfg, &a, &b, 10).unwrap();
        assert_eq!(path.len(), 1);
        assert_eq!(fl.len(), 1);
        assert_eq!(fl[0].circuit_size(), 4);
        assert_eq!(fl[0].links.len(), 1);
        assert_eq!(fl[0].links[0].link, vec![4]);
        let s = secondary_flipons_in(&cfg, &fl[0].label_terms(), 4).unwrap();
        assert!(s.identity_holds());
        assert!(s.ii_iii_cancel());
        assert_eq!(s.omega.len(), 1);
        assert_eq!(s.psi.len(), 1);
        assert_eq!(s.psi.iter().next().unwrap().0, &vec![0, 1, 2, 3]);
        let (same, none) = flipons_for_config(&cfg, &a, &a, 10).unwrap();
        assert!(same.is_empty() && none.is_empty());
    }

    #[test]
    fn empty_input() {
        let s = secondary_chains::<usize>(&[], &0);
        assert!(s.omega.is_zero() && s.psi.is_zero() && s.identity_holds());
    }

    #[test]
    fn identity_on_generic_tuples() {
        let terms = vec![
            FliponTerm { tuple: vec![1, 2, 3, 4, 5, 6], p: 3, coeff: q(2) },
            FliponTerm { tuple: vec![2, 7, 3, 8, 9], p: 4, coeff: q(-1) },
        ];
        let s = secondary_chains(&terms, &0usize);
        assert!(s.identity_holds());
        assert!(s.ii_iii_cancel());
    }

    #[test]
    fn n3_vector_flipon() {
        let f = vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![1, 1, 0],
            vec![1, -1, 0],
            vec![0, 0, 1],
            vec![1, 0, 1],
        ];
        let terms = vec![FliponTerm { tuple: f, p: 4, coeff: q(1) }];
        let s = secondary_flipons(&terms, &vec![1, 2, 3]).unwrap();
        assert!(s.identity_holds());
        assert_eq!(s.omega_sharbly().unwrap().len(), 2);
        assert!(secondary_flipons(&terms, &vec![0, 0, 0]).is_err());
    }
}
