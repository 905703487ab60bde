//! Exact-arithmetic lattice toolkit.
//!
//! Everything here computes over arbitrary-precision rationals; there is no
//! floating point anywhere in a correctness path. Length comparisons are
//! always performed on squared norms, which stay rational even when the
//! lengths themselves do not.
//!
//! The interesting pieces:
//!
//! * [`cvp`] — an approximate closest-vector solver that only talks to a
//!   pluggable approximate shortest-vector oracle, recursing on projected
//!   sublattices and taking the better of a bounded-distance-decoding
//!   candidate and a lifted recursive candidate at every level.
//! * [`bdd`] — bounded-distance decoding through the embedding trick: the
//!   target becomes an extra basis column with a scale entry, so the decoding
//!   error shows up as a unique shortest vector one dimension up.
//! * [`svp`] — the oracle abstraction with exact, LLL and adversarial
//!   backends.
//! * [`reference`] — independent brute-force ground truth used to check all
//!   of the above.

pub mod bdd;
pub mod cvp;
pub mod hnf;
pub mod instance;
pub mod lattice;
pub mod linalg;
pub mod lll;
pub mod rational;
pub mod reference;
pub mod svp;

pub use crate::lattice::{LatticeBasis, LatticeVector};
pub use crate::linalg::{RatMatrix, RatVector};
pub use crate::rational::Rational;

/// Errors shared by all modules of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires a nonzero vector")]
    ZeroVector,
    #[error("columns are linearly dependent")]
    DependentColumns,
    #[error("matrix entries must be integral here")]
    NonIntegralInput,
    #[error("vector is not elementary (coefficient gcd {0} != 1)")]
    NotElementary(String),
    #[error("vector is not a member of the lattice")]
    NotInLattice,
    #[error("projected coefficients are not integral: {0}")]
    NonIntegralCoefficients(String),
    #[error("dimension {dim} exceeds enumeration limit {limit}")]
    DimensionOverLimit { dim: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
