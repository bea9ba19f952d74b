use thiserror::Error;

/// Errors raised by the exact and numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {op} on {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix data has {got} entries, expected {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, got: usize },

    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),

    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),

    #[error("subset {0:?} has odd cardinality")]
    OddSubset(Vec<usize>),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("indices must be distinct, got ({0}, {0})")]
    RepeatedIndex(usize),

    #[error("transvection along the zero vector is undefined")]
    ZeroTransvection,

    #[error("operator does not preserve the half-spin subspace (column {column})")]
    NotInvariant { column: usize },

    #[error("configuration has coincident coordinates z_{0} = z_{1}")]
    CoincidentPoints(usize, usize),

    #[error("intertwiner solution space has dimension {0}, expected at most 1")]
    IntertwinerNotUnique(usize),

    #[error("path violates the clearance {clearance} (min distance {found} at t = {t})")]
    Clearance { clearance: f64, found: f64, t: f64 },

    #[error("path segments do not chain at segment {0}")]
    Discontinuous(usize),

    #[error("numerical integration produced a non-finite value at t = {0}")]
    NonFinite(f64),

    #[error("eigenvalue computation did not converge")]
    NoConvergence,

    #[error("invalid parameter: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
