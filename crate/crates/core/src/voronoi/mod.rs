//! Perfect forms, Voronoi tiles and the built-in datasets for n = 2..5.

pub mod dataset;
pub mod form;
pub mod group;
pub mod sym;
pub mod tile;

pub use dataset::{builtin_dataset, form_data, Dataset, FacetData, FormData};
pub use form::{form_from_minvecs, minimal_vectors, PerfectForm};
pub use group::{match_line_sets, GroupElement, LineMatch};
pub use sym::{normalize_to_section, rank1, section_point, vec_sym};
pub use tile::{
    face_lattice, minimal_face, stabilizer, tile_facets, tile_of, Face, FaceLattice, Tile,
    TileFacet,
};

use crate::Result;

/// The built-in tile with the given form name.
pub fn builtin_tile(name: &str) -> Result<Tile> {
    let d = form_data(name)?;
    tile_of(&form_from_minvecs(&d.name, &d.vectors)?)
}
