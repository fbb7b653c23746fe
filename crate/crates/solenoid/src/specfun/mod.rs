//! Special functions used by the radial solvers.
//!
//! Everything here is real-valued double precision. Functions with poles
//! return [`SpecFunError::Pole`]; callers that need the entire reciprocal
//! of Γ use [`gamma_reciprocal`], which never fails.

mod bessel;
mod gamma;
mod kummer;

pub use bessel::{bessel_j, bessel_jy, bessel_k, bessel_y, bessel_y0};
pub use gamma::{
    cos_pi, digamma, gamma, gamma_reciprocal, gamma_reciprocal_deriv, is_nonpositive_integer,
    ln_gamma, ln_gamma_ratio, pochhammer, sin_pi, trigamma, EULER_GAMMA,
};
pub use kummer::{
    kummer_m, kummer_m_asymptotic, kummer_m_dmu_at0, kummer_m_over_gamma_beta, kummer_m_series,
    kummer_m_with_error, laguerre, tricomi_u,
};

use thiserror::Error;

/// Failure modes of the special-function kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("{function} has a pole at {x}")]
    Pole { function: &'static str, x: f64 },
    #[error("{function}: argument {x} outside the domain")]
    Domain { function: &'static str, x: f64 },
    #[error("{function}: parameter b = {b} is a nonpositive integer")]
    ParameterPole { function: &'static str, b: f64 },
    #[error("{function} did not converge")]
    NoConvergence { function: &'static str },
}

/// A value together with a forward-accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub abs_error_estimate: f64,
}
