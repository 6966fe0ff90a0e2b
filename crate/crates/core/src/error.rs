use thiserror::Error;

/// Errors raised by the numerical kernels, samplers and checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or iteration hit its cap before meeting its tolerance.
    #[error("series did not converge after {terms} terms (partial sum {partial})")]
    NonConvergence { partial: f64, terms: usize },

    /// The result is not representable as a finite `f64`.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Quadrature or another numerical procedure failed.
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
