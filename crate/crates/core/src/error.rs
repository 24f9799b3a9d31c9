use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("extension field context mismatch")]
    ContextMismatch,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("group parameters mismatch")]
    ParamsMismatch,
    #[error("induced map on the Frattini quotient is not invertible")]
    NonInvertibleInducedMap,
    #[error("degenerate key: {0}")]
    DegenerateKey(String),
    #[error("malformed ciphertext: {0}")]
    MalformedCiphertext(String),
    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("inconsistent: {0}")]
    Inconsistent(String),
    #[error("eigenvector mismatch: {0}")]
    EigenvectorMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
