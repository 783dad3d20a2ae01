use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("frame matrix is singular")]
    SingularFrame,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("lattice has rank {rank} but the space has dimension {dim}; full rank required")]
    NotFullRank { rank: usize, dim: usize },
    #[error("invalid elementary operation at index {index}: {reason}")]
    InvalidOperation { index: usize, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration budget of {budget} nodes exceeded after {searched}")]
    BudgetExceeded { searched: u64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
