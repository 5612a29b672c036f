use thiserror::Error;

use crate::estimate::GarchFit;

/// Errors raised by the simulators, estimators and action machinery.
///
/// Every variant corresponds to a violated precondition or a numerical
/// failure; none of them are retried internally.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("spacing error: {0}")]
    Spacing(String),

    #[error("size error: {0}")]
    Size(String),

    #[error("ordering error: {0}")]
    Ordering(String),

    #[error("constraint error: {0}")]
    Constraint(String),

    #[error("singular equation: {0}")]
    Singular(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("support error: {0}")]
    Support(String),

    #[error("sample-size error: {0}")]
    SampleSize(String),

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("stationarity error: {0}")]
    Stationarity(String),

    #[error("segment-size error: {0}")]
    SegmentSize(String),

    #[error("fit error: {0}")]
    Fit(String),

    /// The optimizer ran out of iterations; the best iterate is kept so that
    /// callers can still report it.
    #[error("GARCH likelihood maximization did not converge after {iterations} iterations")]
    Convergence {
        iterations: usize,
        best: Box<GarchFit>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, err: impl FnOnce() -> Error) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(err())
    }
}
