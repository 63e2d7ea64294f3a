//! Hamiltonian cycles of high run length on toroidal grid graphs.
//!
//! The crate builds such cycles by two families of constructions —
//! interleaved composition of two cycles under gcd feasibility conditions,
//! and stacking a cycle into an extra dimension by reflection or translation
//! — and pairs every construction with an independent verifier and an
//! exhaustive small-instance oracle. Nothing a construction claims is
//! trusted: every output is re-traced, re-checked for Hamiltonicity, and its
//! run length re-measured.
//!
//! Modules:
//! - [`torus`]: data model (torus, vertex, step, walk) and the verifier.
//! - [`compose`]: schedule-word composition of two cycles and bound formulas.
//! - [`extend`]: reflection and translation stacking into an extra dimension.
//! - [`oracle`]: exhaustive search for exact maximum run lengths.
//! - [`planner`]: recursive construction plans and the claims report.
//! - [`document`]: file formats, step-word text I/O, and Gray code export.

pub mod compose;
pub mod document;
pub mod error;
pub mod extend;
pub mod oracle;
pub mod planner;
pub mod torus;

pub use error::{Error, Result};
pub use torus::{Step, TorusSpec, VerifyReport, Vertex, Walk};
