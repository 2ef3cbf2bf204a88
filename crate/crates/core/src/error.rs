use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero has no inverse")]
    ZeroInverse,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    /// Work estimate exceeds what the chosen method is allowed to do.
    #[error("refused: {0}")]
    CostGuard(String),

    #[error("degenerate polynomial: {0}")]
    DegeneratePolynomial(String),

    #[error("invalid table cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
