//! The cycle `z_G` for `n = 2, 3, 4`: weighted tile triangulations, the
//! certificate that its boundary vanishes in the coinvariants, facet
//! matching and flipons.

mod boundary;
mod facets;
mod flipon;

pub use boundary::{
    boundary_zero_pairwise, verify_boundary_zero, verify_boundary_zero_with_budget,
    BoundaryCertificate, EntryKind, LedgerEntry,
};
pub use facets::{match_facets, match_facets_with_budget, phi_by_facet, FacetMatch, FacetPieces};
pub use flipon::{
    flipons_for_config, flipons_for_facet, secondary_chains, secondary_flipons,
    secondary_flipons_in, Flipon, FliponTerm, SecondaryFlipons,
};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactq::Q;
use crate::polytope::{is_valid_triangulation, Triangulation};
use crate::sharbly::{
    project_coinvariants, sharbly_of_cone, BasicSharbly, OrbitDictionary, SharblyChain,
};
use crate::voronoi::{builtin_dataset, builtin_tile, stabilizer, Tile};
use crate::{Error, IVec, Result};

/// One oriented simplex of a tile triangulation, with its weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleTerm {
    pub tile: String,
    pub simplex: Vec<usize>,
    /// Canonical vectors of the basic sharbly.
    pub vectors: Vec<IVec>,
    /// `1 / |Stab(T)|`.
    #[serde(with = "crate::exactq::serde_q")]
    pub weight: Q,
    /// Orientation sign of the canonical order.
    pub sign: i32,
}

impl CycleTerm {
    pub fn coeff(&self) -> Q {
        &self.weight * Q::from_integer(self.sign.into())
    }

    pub fn basic(&self) -> BasicSharbly {
        BasicSharbly {
            vectors: self.vectors.clone(),
        }
    }
}

/// A weighted chain with per-term provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleChain {
    pub n: usize,
    pub terms: Vec<CycleTerm>,
}

impl CycleChain {
    /// The combined sharbly chain.
    pub fn chain(&self) -> Result<SharblyChain> {
        let mut c = SharblyChain::new();
        for t in &self.terms {
            c.add_vectors(&t.vectors, t.coeff())?;
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A tile together with the triangulation of its section polytope used in
/// the cycle (labels are the tile's ray labels).
#[derive(Clone, Debug)]
pub struct TiledRepresentative {
    pub tile: Tile,
    pub triangulation: Triangulation,
    pub stabilizer_order: usize,
}

fn whole(tile: &Tile) -> Triangulation {
    Triangulation::from_lists(&[(0..tile.len()).collect()])
}

/// The tile-orbit representatives for rank `n` with their default
/// triangulations. For `n = 4` the D4 tile uses the built-in 16-simplex
/// list unless `d4` overrides it.
pub fn representatives(n: usize, d4: Option<Triangulation>) -> Result<Vec<TiledRepresentative>> {
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedRank(n));
    }
    let data = builtin_dataset(n)?;
    let mut out = Vec::new();
    for f in &data.forms {
        let tile = builtin_tile(&f.name)?;
        let triangulation = if tile.is_simplicial() {
            whole(&tile)
        } else if f.name == "D4" {
            match &d4 {
                Some(t) => t.clone(),
                None => Triangulation::from_lists(
                    data.d4_triangulation.as_ref().expect("n = 4 carries the D4 list"),
                ),
            }
        } else {
            return Err(Error::InvalidInput(format!("no triangulation for {}", f.name)));
        };
        let cfg = tile.section_configuration(&(0..tile.len()).collect::<Vec<_>>())?;
        if !is_valid_triangulation(&cfg, &triangulation) {
            return Err(Error::InvalidTriangulation(format!("{} triangulation", f.name)));
        }
        let stabilizer_order = stabilizer(&tile)?.len();
        out.push(TiledRepresentative {
            tile,
            triangulation,
            stabilizer_order,
        });
    }
    Ok(out)
}

/// Weighted chain of the given representatives.
pub fn assemble(reps: &[TiledRepresentative]) -> Result<CycleChain> {
    let n = reps.first().map_or(0, |r| r.tile.n());
    let mut terms = Vec::new();
    for r in reps {
        let weight = Q::new(One::one(), r.stabilizer_order.into());
        for s in r.triangulation.iter() {
            let vs: Vec<IVec> = s.labels().iter().map(|&l| r.tile.vectors()[l].clone()).collect();
            let (sign, b) = sharbly_of_cone(&vs, r.tile.orientation)?;
            terms.push(CycleTerm {
                tile: r.tile.form.name.clone(),
                simplex: s.labels().to_vec(),
                vectors: b.vectors,
                weight: weight.clone(),
                sign,
            });
        }
    }
    Ok(CycleChain { n, terms })
}

#[allow(non_snake_case)]
pub fn build_zG(n: usize) -> Result<CycleChain> {
    assemble(&representatives(n, None)?)
}

/// `build_zG` with every simplex replaced by its orbit under the tile
/// stabilizer. Each copy carries `1 / |Stab|^2`, so the class agrees with
/// `build_zG`.
#[allow(non_snake_case)]
pub fn build_zG_symmetrized(n: usize) -> Result<CycleChain> {
    let reps = representatives(n, None)?;
    let mut terms = Vec::new();
    for r in &reps {
        let weight = Q::new(One::one(), r.stabilizer_order.into());
        for h in stabilizer(&r.tile)? {
            for s in r.triangulation.iter() {
                let vs: Vec<IVec> = s
                    .labels()
                    .iter()
                    .map(|&l| h.apply(&r.tile.vectors()[l]))
                    .collect();
                let (sign, b) = sharbly_of_cone(&vs, r.tile.orientation)?;
                terms.push(CycleTerm {
                    tile: r.tile.form.name.clone(),
                    simplex: s.labels().to_vec(),
                    vectors: b.vectors,
                    weight: weight.clone() / Q::from_integer(r.stabilizer_order.into()),
                    sign,
                });
            }
        }
    }
    Ok(CycleChain { n, terms })
}

/// Outcome of the boundary computation for the simplex of the `A_n` tile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnRemark {
    pub n: usize,
    /// Nonzero classes of the boundary: representative and coefficient.
    pub classes: Vec<(BasicSharbly, String)>,
    pub single_class: bool,
    pub abs_coefficient: Option<String>,
}

/// `d[s_{A_n}]` in the coinvariants.
pub fn verify_an_remark(n: usize) -> Result<AnRemark> {
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedRank(n));
    }
    let tile = builtin_tile(&format!("A{n}"))?;
    let (s, b) = sharbly_of_cone(tile.vectors(), tile.orientation)?;
    let chain = SharblyChain::from_basic(b, Q::from_integer(s.into()));
    let mut dict = OrbitDictionary::new();
    let proj = project_coinvariants(&chain.boundary()?, &mut dict)?;
    let classes: Vec<(BasicSharbly, String)> = proj
        .terms
        .iter()
        .map(|(id, c)| {
            (
                dict.class(*id).expect("registered").representative.clone(),
                crate::exactq::q_to_string(c),
            )
        })
        .collect();
    let single_class = proj.terms.len() == 1;
    let abs_coefficient = single_class.then(|| {
        let c = proj.terms.values().next().expect("one term");
        crate::exactq::q_to_string(&if *c < Q::zero() { -c.clone() } else { c.clone() })
    });
    Ok(AnRemark {
        n,
        classes,
        single_class,
        abs_coefficient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::{q, qf};

    #[test]
    fn n2_closed_form() {
        let z = build_zG(2).unwrap();
        assert_eq!(z.len(), 1);
        let mut expected = SharblyChain::new();
        expected
            .add_vectors(&[vec![1, 0], vec![0, 1], vec![1, -1]], qf(1, 6))
            .unwrap();
        assert_eq!(z.chain().unwrap(), expected);
    }

    #[test]
    fn n3_coefficient() {
        let z = build_zG(3).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z.terms[0].weight, qf(1, 24));
        let mut expected = SharblyChain::new();
        expected
            .add_vectors(
                &[
                    vec![1, 0, 0],
                    vec![0, 1, 0],
                    vec![0, 0, 1],
                    vec![1, -1, 0],
                    vec![1, 0, -1],
                    vec![0, 1, -1],
                ],
                qf(1, 24),
            )
            .unwrap();
        assert_eq!(z.chain().unwrap(), expected);
    }

    #[test]
    fn remark_small_n() {
        for n in [2, 3] {
            let r = verify_an_remark(n).unwrap();
            assert!(r.classes.is_empty(), "n = {n}");
        }
        assert!(verify_an_remark(5).is_err());
        assert!(build_zG(5).is_err());
        let _ = q(0);
    }
}
