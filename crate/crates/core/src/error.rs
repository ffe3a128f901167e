use thiserror::Error;

/// Errors raised by evaluators, engines and calculators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested expectation (or norm) is infinite.
    #[error("divergent: {0}")]
    Divergent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid integrand: {0}")]
    InvalidIntegrand(String),
    #[error("unknown lemma id `{0}`")]
    UnknownLemma(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
