use logres_engine::ParseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid germ: {0}")]
    InvalidGerm(String),
    #[error("{den} is a zero divisor mod h (killed by {witness})")]
    ZeroDivisor { den: String, witness: String },
    #[error("no nonzerodivisor found: {0}")]
    NoNonzerodivisor(String),
    #[error("invalid factorization: {0}")]
    InvalidFactors(String),
    #[error("invalid branch data: {0}")]
    InvalidBranch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("germ mismatch")]
    GermMismatch,
    #[error("form is not logarithmic")]
    NotLogarithmic,
    #[error("consistency violation: {0}")]
    Consistency(String),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
