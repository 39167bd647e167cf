//! Boundary pieces of triangulated tiles grouped by facet, and the search
//! for the tile on the other side of each facet.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::antisym::AntisymChain;
use crate::exactq::{det, sign, Matrix, Q};
use crate::polytope::{is_valid_triangulation, LabelBits, Triangulation};
use crate::voronoi::tile::tile_facets_with_normals;
use crate::voronoi::{match_line_sets, vec_sym, GroupElement, Tile};
use crate::{Budget, Error, IVec, Result};

/// Oriented boundary simplices of one tile lying in one of its facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetPieces {
    pub tile: usize,
    pub facet: Vec<usize>,
    pub pieces: AntisymChain<usize>,
}

fn cone_orientation(tile: &Tile, labels: &[usize]) -> Result<i32> {
    let rows: Vec<Vec<Q>> = labels.iter().map(|&l| tile.rays[l].clone()).collect();
    Ok(sign(&det(&Matrix::from_rows(&rows))?) * tile.orientation)
}

/// Boundary of each oriented triangulation after interior walls cancel,
/// split by the facet containing each face.
pub fn phi_by_facet(tiles: &[(Tile, Triangulation)]) -> Result<Vec<FacetPieces>> {
    let mut out = Vec::new();
    for (ti, (tile, tri)) in tiles.iter().enumerate() {
        let cfg = tile.section_configuration(&(0..tile.len()).collect::<Vec<_>>())?;
        if !is_valid_triangulation(&cfg, tri) {
            return Err(Error::InvalidTriangulation(format!("tile {ti}")));
        }
        let mut chain = AntisymChain::new();
        for s in tri.iter() {
            let o = cone_orientation(tile, s.labels())?;
            chain.add_tuple(s.labels().to_vec(), Q::from_integer(o.into()));
        }
        let bd = chain.boundary();
        let facets: Vec<Vec<usize>> = tile_facets_with_normals(tile)?
            .into_iter()
            .map(|f| f.labels)
            .collect();
        let bits: Vec<LabelBits> = facets.iter().map(|f| LabelBits::from_labels(f)).collect();
        let mut placed = 0;
        for (f, fb) in facets.iter().zip(&bits) {
            let pieces = bd.filter(|k| LabelBits::from_labels(k).is_subset(fb));
            placed += pieces.len();
            out.push(FacetPieces {
                tile: ti,
                facet: f.clone(),
                pieces,
            });
        }
        if placed != bd.len() {
            return Err(Error::InvalidTriangulation(format!(
                "tile {ti}: a boundary face lies in no facet"
            )));
        }
    }
    Ok(out)
}

/// `g` carries facet `partner_facet` of `partner_tile` onto `facet` of
/// `tile`, and `g . partner_tile` lies on the other side of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetMatch {
    pub tile: usize,
    pub facet: Vec<usize>,
    pub partner_tile: usize,
    pub partner_facet: Vec<usize>,
    pub g: GroupElement,
}

pub fn match_facets(tiles: &[Tile]) -> Result<Vec<FacetMatch>> {
    match_facets_with_budget(tiles, &mut Budget::unlimited())
}

pub fn match_facets_with_budget(tiles: &[Tile], budget: &mut Budget) -> Result<Vec<FacetMatch>> {
    let facets = tiles
        .iter()
        .map(tile_facets_with_normals)
        .collect::<Result<Vec<_>>>()?;
    let pick = |t: &Tile, labels: &[usize]| -> Vec<IVec> {
        labels.iter().map(|&l| t.vectors()[l].clone()).collect()
    };
    let mut out = Vec::new();
    for (a, ta) in tiles.iter().enumerate() {
        for fa in &facets[a] {
            let target = pick(ta, &fa.labels);
            let mut found = None;
            'search: for (b, tb) in tiles.iter().enumerate() {
                for fb in facets[b].iter().filter(|f| f.labels.len() == fa.labels.len()) {
                    let source = pick(tb, &fb.labels);
                    for m in match_line_sets(&source, &target, None, usize::MAX, budget)? {
                        let beyond = (0..tb.len())
                            .filter(|l| !fb.labels.contains(l))
                            .all(|l| fa.eval(&vec_sym(&m.g.apply(&tb.vectors()[l]))) < Q::zero());
                        if beyond {
                            found = Some(FacetMatch {
                                tile: a,
                                facet: fa.labels.clone(),
                                partner_tile: b,
                                partner_facet: fb.labels.clone(),
                                g: m.g,
                            });
                            break 'search;
                        }
                    }
                }
            }
            out.push(found.ok_or_else(|| {
                Error::UnmatchedFacet(format!("facet {:?} of tile {a}", fa.labels))
            })?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voronoi::builtin_tile;

    #[test]
    fn a2_pieces_and_matches() {
        let t = builtin_tile("A2").unwrap();
        let tri = Triangulation::from_lists(&[vec![0, 1, 2]]);
        let p = phi_by_facet(&[(t.clone(), tri)]).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.iter().all(|x| x.pieces.len() == 1));
        let m = match_facets(std::slice::from_ref(&t)).unwrap();
        assert_eq!(m.len(), 3);
        for x in &m {
            assert_eq!(x.partner_tile, 0);
            let moved: Vec<IVec> = x.partner_facet.iter().map(|&l| x.g.apply(&t.vectors()[l])).collect();
            assert_eq!(moved.len(), 2);
        }
    }

    #[test]
    fn invalid_triangulation_rejected() {
        let t = builtin_tile("A2").unwrap();
        let tri = Triangulation::from_lists(&[vec![0, 1]]);
        assert!(phi_by_facet(&[(t, tri)]).is_err());
    }
}
