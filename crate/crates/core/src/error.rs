use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cycle size must be even and at least 4, got {0}")]
    InvalidCycleSize(usize),

    #[error("{what} index {index} out of range (expected {range})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        range: String,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("formula discrepancy in {what}: max deviation {deviation:e}")]
    FormulaDiscrepancy { what: String, deviation: f64 },

    #[error("degenerate parameters: {0}")]
    DegenerateParameter(String),

    #[error("eigenvalue classes disagree with index arithmetic: {0}")]
    ClassMismatch(String),

    #[error("cannot parse initial state {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, index: usize, range: impl Into<String>) -> Self {
        Error::IndexOutOfRange {
            what,
            index,
            range: range.into(),
        }
    }
}
