use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// The variants map onto the CLI exit codes: `Usage` → 2, `Domain` and
/// `Degenerate` → 3, everything numeric → 4.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate regime: {0}")]
    Degenerate(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("catastrophic cancellation: {0}")]
    Cancellation(String),
    #[error("quadrature truncation: {0}")]
    Truncation(String),
    #[error("no sign change of the derivative on the search bracket: {0}")]
    NonBracketing(String),
    #[error("eigenvalue iteration did not converge: {0}")]
    Convergence(String),
    #[error("numeric quality check failed: {0}")]
    Quality(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Domain(_) | Error::Degenerate(_) => 3,
            _ => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
