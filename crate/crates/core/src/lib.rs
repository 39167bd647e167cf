//! Exact sharbly cycles for `SL_n(Z)`.
//!
//! The crate builds top-degree sharbly cycles from triangulated perfect
//! Voronoi tiles, certifies that their boundaries vanish in coinvariants,
//! and checks the orientation/degeneracy structure that makes the
//! volume cocycle positive on them. Supporting machinery covers exact
//! rational polyhedral geometry: convex hulls, circuits, regular
//! triangulations and bistellar flips.

pub mod antisym;
pub mod cert;
pub mod cli;
pub mod cosharbly;
pub mod cycle;
pub mod exactq;
pub mod polytope;
pub mod repro;
pub mod sharbly;
pub mod voronoi;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("zero vector where a nonzero one is required")]
    ZeroVector,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("lifting heights are not generic")]
    NotGeneric,
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("triangulation is not regular")]
    NotRegular,
    #[error("not a circuit: {0}")]
    NotACircuit(String),
    #[error("flip not applicable: {0}")]
    FlipNotApplicable(String),
    #[error("identity fails: {0}")]
    IdentityFailed(String),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form is not perfect: {0}")]
    NotPerfect(String),
    #[error("unsupported rank n = {0}")]
    UnsupportedRank(usize),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("unmatched facet: {0}")]
    UnmatchedFacet(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use exactq::{IVec, Matrix, Q};

/// Node counter for budgeted searches.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    /// Counts one node, failing once the limit is passed.
    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded(format!("more than {} search nodes", self.limit)))
        } else {
            Ok(())
        }
    }
}
