//! CLI errors carry the process exit code.
//!
//! Exit codes: 0 success, 2 malformed or invalid input (syntax, schema,
//! parameters, missing target), 3 violated mathematical preconditions on
//! well-formed input (singular frame, dependent basis, and the like),
//! 4 verification failure or exhausted verification budget.

use padic_lattice::Error as CoreError;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        CliError {
            code: 4,
            message: message.into(),
        }
    }
}

/// Maps library errors onto exit codes: malformed parameters are input
/// errors, unsatisfiable mathematical requirements are precondition errors,
/// and an exhausted enumeration budget belongs to verification.
pub fn from_core(err: CoreError) -> CliError {
    let message = err.to_string();
    match err {
        CoreError::NotPrime(_)
        | CoreError::InvalidParameter(_)
        | CoreError::DimensionMismatch { .. } => CliError::input(message),
        CoreError::SingularMatrix
        | CoreError::SingularFrame
        | CoreError::DependentBasis
        | CoreError::NotFullRank { .. }
        | CoreError::InvalidOperation { .. }
        | CoreError::Precondition(_) => CliError::precondition(message),
        CoreError::BudgetExceeded { .. } => CliError::verification(message),
    }
}

pub type CliResult<T> = Result<T, CliError>;
