//! Cellwise coverings without folds.
//!
//! A covering is a list of pieces, each a finite cover of one two-cell
//! given by the monodromy of its free fundamental group, together with a
//! perfect matching of the lifted boundary occurrences. Matched
//! occurrences lie over the same one-cell, run in opposite directions on
//! the oriented surface, and come from different occurrences of the base
//! complex (no folds along edges).

pub mod assembly;
pub mod atlas;
pub mod enumerate;
pub mod perm;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{CellType, Label, Sign};
use crate::homology::HomologyError;
use perm::{compose, identity, inverse, Perm};

pub use assembly::{
    assemble_surface, piece_boundary_lifts, surface_invariants, LiftedCircle, LiftedOccurrence,
    RepPoint, SurfaceAssembly, SurfaceComponent,
};
pub use atlas::cell_cover_atlas;
pub use enumerate::{enumerate_covers, enumerate_level, Enumeration, EnumerationOptions, PointRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("degree bound {bound} is below the least total degree {required} of the class")]
    BoundTooSmall { bound: u64, required: u64 },
    #[error("degree {degree} exceeds the atlas cap {cap} for non-disk cells")]
    DegreeTooLarge { degree: usize, cap: usize },
    #[error("covers are only built over orientable cells")]
    NonOrientableType,
    #[error("unknown two-cell `{0}`")]
    UnknownCell(Label),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoverPiece {
    pub cell: Label,
    pub degree: usize,
    pub orientation: Sign,
    /// Images of a₁, b₁, …, a_g, b_g, d₁, …, d_{b−1}.
    pub monodromy: Vec<Perm>,
}

impl CoverPiece {
    pub fn trivial(cell: impl Into<Label>, t: CellType, degree: usize, orientation: Sign) -> CoverPiece {
        CoverPiece {
            cell: cell.into(),
            degree,
            orientation,
            monodromy: vec![identity(degree); t.free_rank()],
        }
    }

    /// Sheet permutation for one turn around each boundary circle,
    /// starting at its position-0 corner: σ_j = d_j for j < b and
    /// σ_b = (Π[a_i, b_i] · d₁ ⋯ d_{b−1})⁻¹.
    pub fn boundary_permutations(&self, t: CellType) -> Vec<Perm> {
        let g = t.genus as usize;
        let b = t.boundary_components as usize;
        let mut product = identity(self.degree);
        for i in 0..g {
            let (x, y) = (&self.monodromy[2 * i], &self.monodromy[2 * i + 1]);
            let commutator = compose(&compose(&compose(x, y), &inverse(x)), &inverse(y));
            product = compose(&product, &commutator);
        }
        let mut out = Vec::with_capacity(b);
        for j in 0..b.saturating_sub(1) {
            let d = &self.monodromy[2 * g + j];
            product = compose(&product, d);
            out.push(d.clone());
        }
        out.push(inverse(&product));
        out
    }

    pub fn euler_characteristic(&self, t: CellType) -> i64 {
        self.degree as i64 * t.euler_characteristic()
    }
}
