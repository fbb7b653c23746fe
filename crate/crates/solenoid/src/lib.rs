//! Spectral data for self-adjoint Schrödinger and Dirac Hamiltonians in
//! Aharonov–Bohm and magnetic-solenoid fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] and [`quad`]: special functions and integration rules;
//! * [`ab_radial`], [`ms_radial`], [`dirac_radial`]: the radial problems
//!   for the pure AB field, the AB field plus a uniform field, and the
//!   Dirac equation in the combined field;
//! * [`assembly`]: full 2D/3D spectra, phase factors, spinors and
//!   expansion coefficients;
//! * [`verify`]: norms, Gram matrices, residuals and boundary-condition
//!   fits used by the test-suite and the `verify` command;
//! * [`cli`]: the command-line front end.

pub mod ab_radial;
pub mod angle;
pub mod assembly;
pub mod cli;
pub mod dirac_radial;
pub mod error;
pub mod ms_radial;
pub mod quad;
pub mod roots;
pub mod specfun;
pub mod suites;
pub mod verify;

use std::fmt;

pub use ab_radial::FluxConfig;
pub use angle::Angle;
pub use dirac_radial::{DiracParams, Doublet};
pub use error::{Error, Result};

/// Classification of an angular channel by the strength of its ρ⁻²
/// singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    /// Unique self-adjoint extension.
    R1,
    /// One-parameter family, power-law boundary behaviour.
    R2,
    /// One-parameter family, logarithmic (Schrödinger) or mixed-power
    /// (Dirac) boundary behaviour.
    R3,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::R1 => "R1",
            Region::R2 => "R2",
            Region::R3 => "R3",
        })
    }
}
