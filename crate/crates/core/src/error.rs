//! Crate-wide error type.
//!
//! Construction defects found by the verifier are *not* errors: they are
//! reported in [`crate::torus::VerifyReport`]. The variants here cover
//! malformed inputs, infeasible requests, and exhausted search budgets.

use thiserror::Error;

/// Errors produced by walk construction, composition, extension, planning,
/// and document I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A dimension index is out of range for the torus.
    #[error("dimension {dim} out of range for a {dims}-dimensional torus")]
    DimensionOutOfRange { dim: usize, dims: usize },

    /// A coordinate does not fit its dimension.
    #[error("coordinate {coord} out of range in dimension {dim} of size {size}")]
    CoordinateOutOfRange { dim: usize, coord: usize, size: usize },

    /// A torus was declared with fewer than one dimension or a size below 2.
    #[error("invalid torus: {0}")]
    InvalidTorus(String),

    /// A step has a sign other than +1 or -1.
    #[error("invalid step sign {sign} (expected +1 or -1)")]
    InvalidStepSign { sign: i8 },

    /// A backward step or reflection was requested in a directed dimension.
    #[error("directed dimension {dim} admits only forward steps")]
    DirectedViolation { dim: usize },

    /// A walk declared closed does not trace back to its start vertex.
    #[error("walk declared closed does not return to its start vertex")]
    NotClosed,

    /// An operation requires a verified Hamiltonian cycle as input.
    #[error("input walk is not a verified Hamiltonian cycle: {0}")]
    NotHamiltonian(String),

    /// The split parameters violate the gcd feasibility conditions.
    #[error("invalid split: {0}")]
    InvalidSplit(String),

    /// The composed walk failed verification. This indicates an internal
    /// defect and must not occur for feasible splits.
    #[error("composition defect: {0}")]
    CompositionDefect(String),

    /// Reflection stacking was requested over an odd-sized dimension.
    #[error("dimension {dim} has odd size {size}; reflection stacking needs an even size")]
    NoEvenDimension { dim: usize, size: usize },

    /// No seam assignment produced a single cycle within the backtracking budget.
    #[error("no seam assignment yields a single cycle ({tried} candidates tried)")]
    SeamExhausted { tried: usize },

    /// Translation stacking requires the new size to be a multiple of the
    /// chosen dimension's size.
    #[error("new dimension size {m} is not a multiple of {size}")]
    NotMultiple { size: usize, m: usize },

    /// The input cycle has no step in the requested dimension. Impossible for
    /// a Hamiltonian cycle when the dimension has size >= 2.
    #[error("cycle has no step in dimension {dim}; cannot pick a seam edge")]
    NoSeamEdge { dim: usize },

    /// No construction plan covers the requested torus.
    #[error("unplannable: {0}")]
    Unplannable(String),

    /// A search exhausted its node budget before reaching a decision.
    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    /// A document could not be parsed.
    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
