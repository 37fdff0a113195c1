use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix set is empty")]
    EmptySet,

    #[error("matrix has non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix must be square with positive dimension")]
    InvalidShape,

    #[error("enumeration of {requested} words exceeds the budget of {budget}")]
    BudgetExceeded { requested: u128, budget: usize },

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("dimension {0} is not supported by the exact planar geometry (only d = 2)")]
    UnsupportedDimension(usize),

    #[error("norm evaluation returned {value} at sample {index}")]
    BadNormValue { index: usize, value: f64 },

    #[error("irreducibility certificate has chi_lower = 0; refine the grid or check reducibility")]
    UncertifiedChi,

    #[error("matrix set is reducible")]
    Reducible,

    #[error("irreducibility could not be decided at this grid resolution")]
    Undecided,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mismatched inputs: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
