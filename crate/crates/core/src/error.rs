use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is neither 0 nor a prime")]
    InvalidField(u32),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),
    #[error("index error: {0}")]
    IndexError(String),
    #[error("subspace is not an ideal")]
    NotAnIdeal,
    #[error("algebra is not filiform")]
    NotFiliform,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("wrong characteristic: {0}")]
    WrongCharacteristic(String),
    #[error("no closed-form rule covers this case: {0}")]
    OutOfScope(String),
    #[error("unsupported dimension {0}")]
    UnsupportedDim(usize),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("inconsistent decisions: {0}")]
    Inconsistent(String),
    #[error("malformed report: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, Error>;
