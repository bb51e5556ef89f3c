use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The fast path requires an X-shaped matrix; use the general spectrum.
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),

    #[error("measurement outcome has zero probability ({0:e})")]
    ZeroProbability(f64),

    #[error("degenerate normalization: {0}")]
    Degenerate(String),

    #[error("no sign change on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("usage error: {0}")]
    Usage(String),
}
