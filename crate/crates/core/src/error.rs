use thiserror::Error;

/// Errors raised by the distribution, stability and recovery layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A sampled index exceeded the integer cap.
    #[error("sampled value exceeds integer cap 2^62 ({0})")]
    Overflow(String),

    #[error("quantile search failed to converge: {0}")]
    Convergence(String),

    /// A discretized law produced a negative mass.
    #[error("negative probability mass {mass:e} at j = {index}")]
    Nonnegativity { index: u64, mass: f64 },

    #[error("unknown registry pairing: {0}")]
    Registry(String),

    /// Cauchy-integral extraction would divide by an underflowing r^n.
    #[error("coefficient extraction unstable: {0}")]
    Instability(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
