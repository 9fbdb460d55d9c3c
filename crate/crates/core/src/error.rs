use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is singular (pivot {pivot:e} below threshold)")]
    Singular { pivot: f64 },

    #[error("index {index} out of range for dimension {dim}")]
    OutOfRange { index: usize, dim: usize },

    #[error("negative entry {value} at ({row}, {col}); a nonnegative matrix is required")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("dimension {dim} exceeds the exhaustive limit {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("iteration limit of {0} reached")]
    IterationLimit(usize),

    #[error("feasible set is empty")]
    Infeasible,

    #[error("class precondition failed: {0}")]
    ClassCheck(String),

    #[error("hidden witnesses rejected: {0}")]
    Witness(String),

    #[error("no strictly positive strategy: game value {value:e}")]
    NotStrict { value: f64 },

    #[error("point is not feasible for the augmented instance (violation {violation:e})")]
    InfeasiblePoint { violation: f64 },

    #[error("least-element check failed: {0}")]
    NotLeast(String),

    #[error("instance file: {0}")]
    Parse(String),
}
