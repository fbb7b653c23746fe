//! Radial Schrödinger problem in the pure Aharonov–Bohm field.
//!
//! Channel l carries the operation −d²/dρ² + αρ⁻² with α = κ_l² − 1/4,
//! κ_l = |l + μ|. Energies are in operator units ℰ (the 2D Hamiltonian is
//! this operator divided by M_s, see [`crate::assembly`]). Continuum
//! functions are normalized to δ(ℰ − ℰ′).

use std::f64::consts::PI;

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::specfun::{bessel_j, bessel_jy, bessel_k, gamma, EULER_GAMMA};
use crate::Region;

/// Field and charge parameters shared by all Schrödinger problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxConfig {
    /// Flux in units of the flux quantum.
    pub phi: f64,
    /// Integer part of ε_B φ.
    pub phi0: i64,
    /// Mantissa ε_B φ − φ₀ ∈ [0, 1).
    pub mu: f64,
    pub eps_b: i8,
    pub eps_q: i8,
    /// ε = ε_q ε_B.
    pub eps: i8,
    /// e|B|/cħ, zero for the pure AB field.
    pub gamma: f64,
    /// Inverse-length scale in the AB boundary conditions.
    pub kappa0: f64,
}

fn check_sign(name: &str, v: i8) -> Result<()> {
    if v == 1 || v == -1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be +1 or -1, got {v}")))
    }
}

impl FluxConfig {
    pub fn new(phi: f64, eps_b: i8, eps_q: i8, gamma: f64) -> Result<Self> {
        check_sign("eps_B", eps_b)?;
        check_sign("eps_q", eps_q)?;
        if !phi.is_finite() || phi.abs() > 1e15 {
            return Err(Error::InvalidParameter(format!("flux {phi} out of range")));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must be finite and >= 0, got {gamma}")));
        }
        let x = eps_b as f64 * phi;
        let mut phi0 = x.floor();
        let mut mu = x - phi0;
        if mu >= 1.0 {
            phi0 += 1.0;
            mu = 0.0;
        }
        Ok(FluxConfig { phi, phi0: phi0 as i64, mu, eps_b, eps_q, eps: eps_b * eps_q, gamma, kappa0: 1.0 })
    }

    /// φ = μ with all signs positive.
    pub fn from_mantissa(mu: f64, gamma: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&mu) {
            return Err(Error::InvalidParameter(format!("mantissa must lie in [0, 1), got {mu}")));
        }
        FluxConfig::new(mu, 1, 1, gamma)
    }

    pub fn with_kappa0(self, kappa0: f64) -> Result<Self> {
        if !(kappa0 > 0.0) || !kappa0.is_finite() {
            return Err(Error::InvalidParameter(format!("kappa0 must be positive, got {kappa0}")));
        }
        Ok(FluxConfig { kappa0, ..self })
    }

    /// Channels with a one-parameter family of extensions: {0, −1} for
    /// μ > 0, {0} for μ = 0.
    pub fn extension_channels(&self) -> Vec<i64> {
        if self.mu > 0.0 {
            vec![0, -1]
        } else {
            vec![0]
        }
    }
}

/// Region of a channel with κ_l = |l + μ| and α = κ_l² − 1/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionTag {
    pub region: Region,
    pub kappa_l: f64,
    pub alpha: f64,
}

impl RegionTag {
    pub fn needs_extension(&self) -> bool {
        self.region != Region::R1
    }
}

pub fn classify(l: i64, mu: f64) -> RegionTag {
    let kappa_l = (l as f64 + mu).abs();
    let region = if l == 0 && mu == 0.0 {
        Region::R3
    } else if kappa_l < 1.0 {
        Region::R2
    } else {
        Region::R1
    };
    RegionTag { region, kappa_l, alpha: kappa_l * kappa_l - 0.25 }
}

pub(crate) fn require_lambda(tag: &RegionTag, l: i64, lambda: Option<Angle>) -> Result<Option<Angle>> {
    match (tag.region, lambda) {
        (Region::R1, _) => Ok(None),
        (_, Some(a)) => Ok(Some(a)),
        (_, None) => Err(Error::MissingExtension { l }),
    }
}

/// λ̃ = Γ(1−κ)/Γ(1+κ)·tan λ, or `None` at the endpoint.
pub fn lambda_tilde(kappa: f64, lambda: Angle) -> Option<f64> {
    lambda.tan().map(|t| gamma_ratio_1mk_1pk(kappa) * t)
}

fn gamma_ratio_1mk_1pk(kappa: f64) -> f64 {
    gamma(1.0 - kappa).expect("0 < kappa < 1") / gamma(1.0 + kappa).expect("kappa > 0")
}

/// Normalization factor of the second-region continuum,
/// 1 + 2λ̃t cos πκ + λ̃²t² with t = (ℰ/4κ₀²)^κ. Positive for ℰ > 0.
pub fn q_a(kappa: f64, lambda_tilde: f64, energy: f64, kappa0: f64) -> f64 {
    let t = (energy / (4.0 * kappa0 * kappa0)).powf(kappa);
    let lt = lambda_tilde * t;
    1.0 + 2.0 * lt * (PI * kappa).cos() + lt * lt
}

/// Generalized eigenfunction U_ℰ(ρ) of the continuous spectrum.
pub fn continuous_eigenfunction(l: i64, cfg: &FluxConfig, lambda: Option<Angle>, energy: f64, rho: f64) -> Result<f64> {
    if !(energy >= 0.0) {
        return Err(Error::InvalidParameter(format!("continuum energy must be >= 0, got {energy}")));
    }
    if !(rho > 0.0) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    let tag = classify(l, cfg.mu);
    let lambda = require_lambda(&tag, l, lambda)?;
    let k = energy.sqrt();
    let x = k * rho;
    let half = (0.5 * rho).sqrt();
    let kappa = tag.kappa_l;
    match (tag.region, lambda) {
        (Region::R1, _) => {
            if energy == 0.0 {
                return Ok(0.0);
            }
            Ok(half * bessel_j(kappa, x)?)
        }
        (Region::R2, Some(lam)) => match lambda_tilde(kappa, lam) {
            None => {
                if energy == 0.0 {
                    return Err(Error::InvalidParameter(
                        "the lambda = pi/2 continuum function is singular at zero energy".into(),
                    ));
                }
                Ok(half * bessel_j(-kappa, x)?)
            }
            Some(lt) => {
                if energy == 0.0 {
                    return Ok(0.0);
                }
                let t = (energy / (4.0 * cfg.kappa0 * cfg.kappa0)).powf(kappa);
                let q = q_a(kappa, lt, energy, cfg.kappa0);
                Ok((rho / (2.0 * q)).sqrt() * (bessel_j(kappa, x)? + lt * t * bessel_j(-kappa, x)?))
            }
        },
        (Region::R3, Some(lam)) => {
            if energy == 0.0 {
                return Ok(half);
            }
            match lam.tan() {
                None => Ok(half * bessel_j(0.0, x)?),
                Some(t) => {
                    let lt = t - EULER_GAMMA - (k / (2.0 * cfg.kappa0)).ln();
                    let (j0, y0) = bessel_jy(0.0, x)?;
                    let norm = (rho / (2.0 * (lt * lt + PI * PI / 4.0))).sqrt();
                    Ok(norm * (lt * j0 + 0.5 * PI * y0))
                }
            }
        }
        _ => unreachable!("extension parameter checked above"),
    }
}

/// The negative level of a second- or third-region channel and its
/// normalized eigenfunction A·√ρ·K_ν(√|ℰ|ρ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub l: i64,
    pub region: Region,
    pub lambda: Angle,
    pub energy: f64,
    /// Order ν of the Macdonald function.
    pub order: f64,
    pub amplitude: f64,
}

impl BoundState {
    pub fn eval(&self, rho: f64) -> f64 {
        if !(rho > 0.0) {
            return f64::NAN;
        }
        let q = (-self.energy).sqrt();
        match bessel_k(self.order, q * rho) {
            Ok(k) => self.amplitude * rho.sqrt() * k,
            Err(_) => f64::NAN,
        }
    }
}

/// The negative level, if any.
pub fn bound_state(l: i64, cfg: &FluxConfig, lambda: Angle) -> Result<Option<BoundState>> {
    let tag = classify(l, cfg.mu);
    let k0 = cfg.kappa0;
    match tag.region {
        Region::R1 => Err(Error::RegionMismatch { expected: Region::R2, found: Region::R1 }),
        Region::R2 => {
            let kappa = tag.kappa_l;
            match lambda_tilde(kappa, lambda) {
                Some(lt) if lt < 0.0 => {
                    let energy = -4.0 * k0 * k0 * (-lt).powf(-1.0 / kappa);
                    if energy == 0.0 || !energy.is_finite() {
                        return Err(Error::OutOfRange(format!("bound level {energy} for lambda = {lambda}")));
                    }
                    let amplitude = (2.0 * energy.abs() * (PI * kappa).sin() / (PI * kappa)).sqrt();
                    Ok(Some(BoundState { l, region: Region::R2, lambda, energy, order: kappa, amplitude }))
                }
                _ => Ok(None),
            }
        }
        Region::R3 => match lambda.tan() {
            None => Ok(None),
            Some(t) => {
                let energy = -4.0 * k0 * k0 * (2.0 * (t - EULER_GAMMA)).exp();
                if energy == 0.0 || !energy.is_finite() {
                    return Err(Error::OutOfRange(format!("bound level {energy} for lambda = {lambda}")));
                }
                let amplitude = (2.0 * energy.abs()).sqrt();
                Ok(Some(BoundState { l, region: Region::R3, lambda, energy, order: 0.0, amplitude }))
            }
        },
    }
}

/// Spectrum of one channel: the ray [0, ∞) plus at most one negative level.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSpectrum {
    pub l: i64,
    pub tag: RegionTag,
    pub lambda: Option<Angle>,
    /// Lower edge of the continuous spectrum.
    pub continuum_from: f64,
    pub bound_states: Vec<BoundState>,
}

pub fn spectrum(l: i64, cfg: &FluxConfig, lambda: Option<Angle>) -> Result<RadialSpectrum> {
    let tag = classify(l, cfg.mu);
    let lambda = require_lambda(&tag, l, lambda)?;
    let bound_states = match lambda {
        Some(lam) => bound_state(l, cfg, lam)?.into_iter().collect(),
        None => Vec::new(),
    };
    Ok(RadialSpectrum { l, tag, lambda, continuum_from: 0.0, bound_states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn flux_decomposition() {
        let c = FluxConfig::new(-2.3, 1, -1, 0.0).unwrap();
        assert_eq!(c.phi0, -3);
        assert!((c.mu - 0.7).abs() < 1e-14);
        assert_eq!(c.eps, -1);
        let d = FluxConfig::new(-2.3, -1, 1, 0.0).unwrap();
        assert_eq!(d.phi0, 2);
        assert!((d.mu - 0.3).abs() < 1e-14);
        assert!(FluxConfig::new(1.0, 2, 1, 0.0).is_err());
    }

    #[test]
    fn classification() {
        let t = classify(3, 0.2);
        assert_eq!(t.region, Region::R1);
        assert!((t.kappa_l - 3.2).abs() < 1e-15);
        let t = classify(0, 0.0);
        assert_eq!(t.region, Region::R3);
        assert_eq!(t.alpha, -0.25);
        let t = classify(-1, 0.4);
        assert_eq!(t.region, Region::R2);
        assert!((t.kappa_l - 0.6).abs() < 1e-15);
        assert_eq!(classify(-1, 0.0).region, Region::R1);
        assert_eq!(classify(-2, 0.5).region, Region::R1);
    }

    #[test]
    fn first_region_bessel_form() {
        let cfg = FluxConfig::from_mantissa(0.0, 0.0).unwrap();
        let u = continuous_eigenfunction(1, &cfg, None, 1.0, 2.0).unwrap();
        assert!((u - 0.576_724_807_756_873_4).abs() < 1e-12);
    }

    #[test]
    fn third_region_endpoint_limit() {
        let cfg = FluxConfig::from_mantissa(0.0, 0.0).unwrap();
        let end = continuous_eigenfunction(0, &cfg, Some(Angle::HALF_PI), 2.0, 1.3).unwrap();
        let near = continuous_eigenfunction(0, &cfg, Some(Angle::new(FRAC_PI_2_MINUS).unwrap()), 2.0, 1.3).unwrap();
        assert!((end - near).abs() < 1e-6);
        assert!((end - (0.65f64).sqrt() * bessel_j(0.0, 2f64.sqrt() * 1.3).unwrap()).abs() < 1e-14);
    }
    const FRAC_PI_2_MINUS: f64 = std::f64::consts::FRAC_PI_2 - 1e-9;

    #[test]
    fn second_region_zero_angle_is_pure_bessel() {
        let cfg = FluxConfig::from_mantissa(0.3, 0.0).unwrap();
        let u = continuous_eigenfunction(0, &cfg, Some(Angle::ZERO), 1.7, 0.9).unwrap();
        let want = (0.45f64).sqrt() * bessel_j(0.3, 1.7f64.sqrt() * 0.9).unwrap();
        assert!((u - want).abs() < 1e-14);
    }

    #[test]
    fn bound_state_values() {
        let cfg = FluxConfig::from_mantissa(0.0, 0.0).unwrap();
        let b = bound_state(0, &cfg, Angle::ZERO).unwrap().unwrap();
        assert!((b.energy + 1.260_947_006_748_773_6).abs() < 1e-12);
        let cfg = FluxConfig::from_mantissa(0.5, 0.0).unwrap();
        let b = bound_state(0, &cfg, Angle::new(-FRAC_PI_4).unwrap()).unwrap().unwrap();
        assert!((b.energy + 1.0).abs() < 1e-12);
        assert!(bound_state(0, &cfg, Angle::new(0.3).unwrap()).unwrap().is_none());
        assert!(bound_state(3, &cfg, Angle::ZERO).is_err());
    }

    #[test]
    fn missing_extension_is_reported() {
        let cfg = FluxConfig::from_mantissa(0.4, 0.0).unwrap();
        assert_eq!(spectrum(-1, &cfg, None).unwrap_err(), Error::MissingExtension { l: -1 });
        assert!(spectrum(2, &cfg, None).unwrap().bound_states.is_empty());
    }
}
