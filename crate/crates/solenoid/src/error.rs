use thiserror::Error;

use crate::specfun::SpecFunError;
use crate::Region;

/// Errors raised by the spectral solvers and the verification engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("channel l = {l} needs an extension parameter (l_a in {{0, -1}} for mu > 0, l_0 = 0 for mu = 0)")]
    MissingExtension { l: i64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operation needs region {expected}, channel is in {found}")]
    RegionMismatch { expected: Region, found: Region },
    #[error("root search did not converge in bracket [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64 },
    #[error("no sign change of the spectral function in bracket [{lo}, {hi}]")]
    EmptyBracket { lo: f64, hi: f64 },
    #[error("quadrature did not converge: estimate {value}, error {error}")]
    Quadrature { value: f64, error: f64 },
    #[error("level lies outside the floating-point range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
