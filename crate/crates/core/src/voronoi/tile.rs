//! Voronoi tiles: the cone on the rank-1 forms of the minimal vectors of a
//! perfect form, its facets, face lattice and stabilizer.

use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

use super::form::{bilinear, PerfectForm};
use super::group::{match_line_sets, GroupElement, LineMatch};
use super::sym::{section_point, vec_sym};
use crate::exactq::{rank, Matrix, Q};
use crate::polytope::{hull::cone_facets, LabelBits, PointConfiguration};
use crate::{Budget, Error, Result};

/// A tile with rays `v'` (vectorized) and trace-1 section points `v''`,
/// labelled like the minimal vectors of its form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tile {
    pub form: PerfectForm,
    pub rays: Vec<Vec<Q>>,
    pub section_points: Vec<Vec<Q>>,
    pub orientation: i32,
}

/// A facet of a tile: its ray labels and an inward normal in `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileFacet {
    pub labels: Vec<usize>,
    pub normal: Vec<Q>,
}

impl TileFacet {
    /// Value of the inward normal on `y`.
    pub fn eval(&self, y: &[Q]) -> Q {
        self.normal
            .iter()
            .zip(y)
            .filter(|(a, _)| !a.is_zero())
            .fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }
}

pub fn tile_of(form: &PerfectForm) -> Result<Tile> {
    if !form.verify()? {
        return Err(Error::NotPerfect(format!(
            "{}: stored minimal vectors do not match the form",
            form.name
        )));
    }
    Ok(tile_of_unchecked(form))
}

/// Builds the tile without re-deriving the minimal vectors.
pub(crate) fn tile_of_unchecked(form: &PerfectForm) -> Tile {
    let rays: Vec<Vec<Q>> = form.minimal_vectors.iter().map(|v| vec_sym(v)).collect();
    let section_points = form
        .minimal_vectors
        .iter()
        .map(|v| section_point(v).expect("minimal vectors are nonzero"))
        .collect();
    Tile {
        form: form.clone(),
        rays,
        section_points,
        orientation: 1,
    }
}

impl Tile {
    pub fn n(&self) -> usize {
        self.form.n
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.form.minimal_vectors
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.rays.first().map_or(0, |r| r.len())
    }

    /// Section points of the given labels in coordinates of their own
    /// affine span (the frame is fixed by label order).
    pub fn section_configuration(&self, labels: &[usize]) -> Result<PointConfiguration> {
        let pts = labels.iter().map(|&l| self.section_points[l].clone()).collect();
        PointConfiguration::new(pts)?.project_to_span()
    }

    /// Image under `g`: minimal vectors `g v` (same labels).
    pub fn transformed(&self, g: &GroupElement) -> Tile {
        let vectors = self.form.minimal_vectors.iter().map(|v| g.apply(v)).collect();
        let ginv = g.inverse().to_matrix();
        let gram = ginv.transpose().mul(&self.form.gram).mul(&ginv);
        let form = PerfectForm {
            name: self.form.name.clone(),
            n: self.form.n,
            gram,
            min_value: self.form.min_value.clone(),
            minimal_vectors: vectors,
        };
        let mut t = tile_of_unchecked(&form);
        t.orientation = self.orientation;
        t
    }
}

/// Facets with inward normals, sorted by label set.
pub fn tile_facets_with_normals(tile: &Tile) -> Result<Vec<TileFacet>> {
    let mut out: Vec<TileFacet> = cone_facets(&tile.rays)?
        .into_iter()
        .map(|(f, z)| TileFacet {
            labels: z.labels(),
            normal: f.into_iter().map(Q::from_integer).collect(),
        })
        .collect();
    out.sort_by(|a, b| a.labels.cmp(&b.labels));
    Ok(out)
}

/// Ray label sets of the facets, sorted.
pub fn tile_facets(tile: &Tile) -> Result<Vec<Vec<usize>>> {
    Ok(tile_facets_with_normals(tile)?
        .into_iter()
        .map(|f| f.labels)
        .collect())
}

/// Facet counts by number of rays.
pub fn facet_census(facets: &[Vec<usize>]) -> BTreeMap<usize, usize> {
    let mut census = BTreeMap::new();
    for f in facets {
        *census.entry(f.len()).or_insert(0) += 1;
    }
    census
}

/// A face of the section polytope.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    pub dim: usize,
    pub labels: Vec<usize>,
}

/// All nonempty faces of a tile's section polytope, the tile included.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub faces: Vec<Face>,
    facets: Vec<LabelBits>,
    top: LabelBits,
}

impl FaceLattice {
    /// Face counts by dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.faces.iter().map(|f| f.dim).max().unwrap_or(0);
        let mut v = vec![0; top + 1];
        for f in &self.faces {
            v[f.dim] += 1;
        }
        v
    }

    pub fn contains(&self, labels: &[usize]) -> bool {
        self.faces.iter().any(|f| f.labels == labels)
    }

    /// `b` covers `a` in the lattice.
    pub fn is_subface(a: &Face, b: &Face) -> bool {
        LabelBits::from_labels(&a.labels).is_subset(&LabelBits::from_labels(&b.labels))
    }
}

pub fn face_lattice(tile: &Tile) -> Result<FaceLattice> {
    let facets: Vec<LabelBits> = tile_facets(tile)?
        .iter()
        .map(|f| LabelBits::from_labels(f))
        .collect();
    let top = LabelBits::from_labels(&(0..tile.len()).collect::<Vec<_>>());
    let mut seen: BTreeSet<LabelBits> = facets.iter().copied().collect();
    let mut queue: Vec<LabelBits> = facets.clone();
    while let Some(f) = queue.pop() {
        for g in &facets {
            let h = f.and(g);
            if h.count() > 0 && seen.insert(h) {
                queue.push(h);
            }
        }
    }
    seen.insert(top);
    let mut faces: Vec<Face> = seen
        .into_iter()
        .map(|b| {
            let labels = b.labels();
            let rows: Vec<Vec<Q>> = labels.iter().map(|&l| tile.rays[l].clone()).collect();
            Face {
                dim: rank(&Matrix::from_rows(&rows)) - 1,
                labels,
            }
        })
        .collect();
    faces.sort();
    Ok(FaceLattice { faces, facets, top })
}

/// The smallest face containing the labels `s`.
pub fn minimal_face(lattice: &FaceLattice, s: &[usize]) -> Result<Face> {
    let sb = LabelBits::from_labels(s);
    if s.is_empty() || !sb.is_subset(&lattice.top) {
        return Err(Error::NotFound("labels are not vertices of the tile".into()));
    }
    let mut acc = lattice.top;
    for f in &lattice.facets {
        if sb.is_subset(f) {
            acc = acc.and(f);
        }
    }
    let labels = acc.labels();
    lattice
        .faces
        .iter()
        .find(|f| f.labels == labels)
        .cloned()
        .ok_or_else(|| Error::NotFound("face missing from the lattice".into()))
}

/// Elements of `SL_n(Z)` carrying the minimal vectors of `a` onto those of
/// `b` (up to sign), so `g . a = b` as tiles.
pub fn tile_isometries(a: &Tile, b: &Tile, limit: usize, budget: &mut Budget) -> Result<Vec<LineMatch>> {
    let va = a.vectors();
    let vb = b.vectors();
    let fa = |i: usize, j: usize| bilinear(&a.form.gram, &va[i], &va[j]);
    let fb = |i: usize, j: usize| bilinear(&b.form.gram, &vb[i], &vb[j]);
    match_line_sets(va, vb, Some((&fa, &fb)), limit, budget)
}

/// The stabilizer of the tile in `SL_n(Z)`.
pub fn stabilizer(tile: &Tile) -> Result<Vec<GroupElement>> {
    stabilizer_with_budget(tile, &mut Budget::unlimited())
}

pub fn stabilizer_with_budget(tile: &Tile, budget: &mut Budget) -> Result<Vec<GroupElement>> {
    let mut out: Vec<GroupElement> = tile_isometries(tile, tile, usize::MAX, budget)?
        .into_iter()
        .map(|m| m.g)
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}
