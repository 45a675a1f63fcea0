use thiserror::Error;

/// Errors raised while building models, tensor systems or spectral data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("row {row} sums to {sum}, which is not within tolerance of 1")]
    NonStochasticRow { row: usize, sum: f64 },

    #[error("initial distribution sums to {sum}, which is not within tolerance of 1")]
    NonStochasticInitial { sum: f64 },

    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("requested dimension {requested} exceeds the cap of {cap}")]
    DimensionOverflow { requested: u128, cap: usize },

    #[error("invalid Rényi order {0}")]
    InvalidOrder(f64),

    #[error("sequence length must be at least 1")]
    InvalidLength,

    #[error("power iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("noise level {0} is outside [0, 1/2]")]
    InvalidNoise(f64),

    #[error("expected an alphabet of size {expected}, found {found}")]
    WrongAlphabet { expected: usize, found: usize },

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("invalid model file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for the size guards (tensor dimension, enumeration size,
    /// polynomial degree).
    pub fn is_dimension_guard(&self) -> bool {
        matches!(self, Error::DimensionOverflow { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
