use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("malformed index multiplicity: {0}")]
    IndexMultiplicity(String),

    #[error("unbound index: {0}")]
    UnboundIndex(String),

    #[error("basis reconstruction failed: {0}")]
    Reconstruction(String),

    #[error("expression outside the rank-4 basis span: {0}")]
    OutsideSpan(String),

    #[error("unsupported parity: {0}")]
    UnsupportedParity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric oracle did not converge: {0}")]
    NonConvergence(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("table mismatch: {0}")]
    TableMismatch(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
