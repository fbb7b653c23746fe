//! Radial Schrödinger problem in the magnetic-solenoid field (AB flux plus
//! a uniform field B ≠ 0).
//!
//! Channel l carries −d²/dρ² + [(l+μ+γρ²/2)² − 1/4]ρ⁻², i.e. the shifted
//! oscillator −d²/dρ² + (κ²−1/4)ρ⁻² + γ²ρ²/4 plus the constant γ(l+μ).
//! Spectral functions are written in the shifted energy W; levels report
//! ℰ = W + γ(l+μ). With z = γρ²/2 and g(ρ) = (γ/2)^{1/4}ρ^{1/2}e^{−z/2},
//! the regular solutions are u_± = g·z^{±κ/2}·M(α_±, 1±κ; z),
//! α_± = 1/2 ± κ/2 − W/2γ.

use crate::ab_radial::{classify, require_lambda, FluxConfig, RegionTag};
use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::roots::brent;
use crate::specfun::{
    digamma, gamma, gamma_reciprocal, gamma_reciprocal_deriv, laguerre, ln_gamma, ln_gamma_ratio, tricomi_u, trigamma,
};
use crate::Region;

/// Default number of levels per channel is `DEFAULT_M_MAX + 1`.
pub const DEFAULT_M_MAX: u32 = 64;

const PSI_ONE: f64 = -crate::specfun::EULER_GAMMA;

/// Below this z the Tricomi function is replaced by its two leading terms.
const TINY_Z: f64 = 1e-30;

/// How a level's eigenfunction is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// √(γρ)·z^{ν/2}e^{−z/2}·√(m!/Γ(m+ν+1))·L_m^ν(z), ν = ±κ.
    Laguerre { nu: f64, m: u32 },
    /// c·g·z^{κ/2}·U(α₊, 1+κ; z).
    DecayingPower { kappa: f64, a: f64, scale: f64 },
    /// c·g·U(α₀, 1; z).
    DecayingLog { a: f64, scale: f64 },
}

/// One discrete level of a channel together with its normalized
/// eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MsLevel {
    pub l: i64,
    /// Radial quantum number, levels ascending in m.
    pub m: u32,
    /// ℰ in operator units.
    pub energy: f64,
    /// Normalization constant Q of the level.
    pub weight: f64,
    pub tag: RegionTag,
    pub lambda: Option<Angle>,
    pub gamma: f64,
    shape: Shape,
}

impl MsLevel {
    /// Normalized eigenfunction U(ρ); NaN where it cannot be represented
    /// (levels pushed far below zero by a near-endpoint angle).
    pub fn eval(&self, rho: f64) -> f64 {
        if !(rho > 0.0) {
            return f64::NAN;
        }
        let gam = self.gamma;
        let z = 0.5 * gam * rho * rho;
        match self.shape {
            Shape::Laguerre { nu, m } => laguerre_form(gam, nu, m, rho),
            Shape::DecayingPower { kappa, a, scale } => {
                let g = (0.5 * gam).powf(0.25) * rho.sqrt() * (-0.5 * z).exp();
                if z < TINY_Z {
                    // z^{κ/2}U ≈ Γ(κ)/Γ(a) z^{−κ/2} + Γ(−κ)/Γ(a−κ) z^{κ/2}
                    let ln_z = (0.5 * gam).ln() + 2.0 * rho.ln();
                    let lead = gamma(kappa).unwrap_or(f64::NAN) * gamma_reciprocal(a) * (-0.5 * kappa * ln_z).exp()
                        + gamma(-kappa).unwrap_or(f64::NAN) * gamma_reciprocal(a - kappa) * (0.5 * kappa * ln_z).exp();
                    return scale * g * lead;
                }
                match tricomi_u(a, 1.0 + kappa, z) {
                    Ok(u) => scale * g * z.powf(0.5 * kappa) * u,
                    Err(_) => f64::NAN,
                }
            }
            Shape::DecayingLog { a, scale } => {
                let g = (0.5 * gam).powf(0.25) * rho.sqrt() * (-0.5 * z).exp();
                if z < TINY_Z {
                    let ln_z = (0.5 * gam).ln() + 2.0 * rho.ln();
                    let psi = digamma(a).unwrap_or(f64::NAN);
                    return -scale * g * (ln_z + psi + 2.0 * crate::specfun::EULER_GAMMA) * gamma_reciprocal(a);
                }
                match tricomi_u(a, 1.0, z) {
                    Ok(u) => scale * g * u,
                    Err(_) => f64::NAN,
                }
            }
        }
    }

    /// The shifted energy W = ℰ − γ(l+μ) at which the spectral function
    /// vanishes.
    pub fn shifted_energy(&self, mu: f64) -> f64 {
        self.energy - self.gamma * (self.l as f64 + mu)
    }
}

fn laguerre_form(gam: f64, nu: f64, m: u32, rho: f64) -> f64 {
    let z = 0.5 * gam * rho * rho;
    let norm = 0.5 * (ln_gamma(m as f64 + 1.0).unwrap_or(0.0) - ln_gamma(m as f64 + nu + 1.0).unwrap_or(0.0));
    (gam * rho).sqrt() * (0.5 * nu * z.ln() - 0.5 * z + norm).exp() * laguerre(m, nu, z)
}

/// Q_{l,m} = [√(2γ) Γ(1+κ+m) / (m! Γ²(1+κ))]^{1/2}, also used with κ → −κ.
fn weight_first_region(gam: f64, kappa: f64, m: u32) -> f64 {
    let mf = m as f64;
    let ln_q2 = 0.5 * (2.0 * gam).ln() + ln_gamma(1.0 + kappa + mf).unwrap_or(f64::NAN)
        - ln_gamma(mf + 1.0).unwrap_or(f64::NAN)
        - 2.0 * ln_gamma(1.0 + kappa).unwrap_or(f64::NAN);
    (0.5 * ln_q2).exp()
}

/// ℰ_{l,m} = γ(1 + |l+μ| + (l+μ) + 2m).
pub fn first_region_energy(l: i64, mu: f64, gam: f64, m: u32) -> f64 {
    let lm = l as f64 + mu;
    gam * (1.0 + lm.abs() + lm + 2.0 * m as f64)
}

/// U⁽¹⁾_{l,m}(ρ).
pub fn eigenfunction_u1(l: i64, mu: f64, gam: f64, m: u32, rho: f64) -> f64 {
    laguerre_form(gam, (l as f64 + mu).abs(), m, rho)
}

/// (ω₊(W), ω₋(W)) with ω_± = Γ(1±κ)/Γ(α_±).
pub fn omega_pm(w: f64, kappa: f64, gam: f64) -> (f64, f64) {
    let x = 0.5 - 0.5 * w / gam;
    (
        gamma(1.0 + kappa).unwrap_or(f64::NAN) * gamma_reciprocal(x + 0.5 * kappa),
        gamma(1.0 - kappa).unwrap_or(f64::NAN) * gamma_reciprocal(x - 0.5 * kappa),
    )
}

/// ω_λ(W) = ω₊ sin λ + ω₋ cos λ; its zeros are the shifted levels of a
/// second-region channel. Entire in W.
pub fn omega_lambda_a(w: f64, lambda: Angle, kappa: f64, gam: f64) -> f64 {
    let (p, m) = omega_pm(w, kappa, gam);
    p * lambda.sin() + m * lambda.cos()
}

/// ω̃_λ(W) = ω₊ cos λ − ω₋ sin λ.
pub fn omega_tilde_lambda_a(w: f64, lambda: Angle, kappa: f64, gam: f64) -> f64 {
    let (p, m) = omega_pm(w, kappa, gam);
    p * lambda.cos() - m * lambda.sin()
}

fn omega_pm_deriv(w: f64, kappa: f64, gam: f64) -> (f64, f64) {
    let x = 0.5 - 0.5 * w / gam;
    let c = -0.5 / gam;
    (
        c * gamma(1.0 + kappa).unwrap_or(f64::NAN) * gamma_reciprocal_deriv(x + 0.5 * kappa),
        c * gamma(1.0 - kappa).unwrap_or(f64::NAN) * gamma_reciprocal_deriv(x - 0.5 * kappa),
    )
}

/// Spectral function of the μ = 0, l = 0 channel,
/// cos λ[ψ(α₀) − 2ψ(1)] − 2 sin λ with α₀ = 1/2 − W/2γ. Its zeros are the
/// levels whose eigenfunctions behave as
/// ρ^{1/2}ln(√(γ/2)ρ) cos λ + ρ^{1/2} sin λ at the origin.
pub fn omega_lambda(w: f64, lambda: Angle, gam: f64) -> Result<f64> {
    let a0 = 0.5 - 0.5 * w / gam;
    Ok(lambda.cos() * (digamma(a0)? - 2.0 * PSI_ONE) - 2.0 * lambda.sin())
}

/// sin λ[ψ(α₀) − 2ψ(1)] + 2 cos λ.
pub fn omega_tilde_lambda(w: f64, lambda: Angle, gam: f64) -> Result<f64> {
    let a0 = 0.5 - 0.5 * w / gam;
    Ok(lambda.sin() * (digamma(a0)? - 2.0 * PSI_ONE) + 2.0 * lambda.cos())
}

fn check_gamma(cfg: &FluxConfig) -> Result<f64> {
    if cfg.gamma > 0.0 && cfg.gamma.is_finite() {
        Ok(cfg.gamma)
    } else {
        Err(Error::InvalidParameter(format!(
            "the magnetic-solenoid problem needs gamma > 0, got {}",
            cfg.gamma
        )))
    }
}

/// Levels m = 0..=m_max of channel l, ascending.
pub fn discrete_spectrum(l: i64, cfg: &FluxConfig, lambda: Option<Angle>, m_max: u32) -> Result<Vec<MsLevel>> {
    let gam = check_gamma(cfg)?;
    let tag = classify(l, cfg.mu);
    let lambda = require_lambda(&tag, l, lambda)?;
    match (tag.region, lambda) {
        (Region::R1, _) => Ok((0..=m_max)
            .map(|m| MsLevel {
                l,
                m,
                energy: first_region_energy(l, cfg.mu, gam, m),
                weight: weight_first_region(gam, tag.kappa_l, m),
                tag,
                lambda: None,
                gamma: gam,
                shape: Shape::Laguerre { nu: tag.kappa_l, m },
            })
            .collect()),
        (Region::R2, Some(lam)) => second_region(l, cfg, tag, lam, m_max),
        (Region::R3, Some(lam)) => third_region(tag, gam, lam, m_max),
        _ => unreachable!("extension parameter checked above"),
    }
}

fn second_region(l: i64, cfg: &FluxConfig, tag: RegionTag, lam: Angle, m_max: u32) -> Result<Vec<MsLevel>> {
    let gam = cfg.gamma;
    let kappa = tag.kappa_l;
    let shift = gam * (l as f64 + cfg.mu);
    let level = |m: u32, w: f64, weight: f64, shape: Shape| MsLevel {
        l,
        m,
        energy: w + shift,
        weight,
        tag,
        lambda: Some(lam),
        gamma: gam,
        shape,
    };
    // Closed forms at the two special angles.
    if lam.is_half_pi() || lam.is_zero() {
        let nu = if lam.is_half_pi() { kappa } else { -kappa };
        return Ok((0..=m_max)
            .map(|m| {
                let w = gam * (1.0 + nu + 2.0 * m as f64);
                level(m, w, weight_first_region(gam, nu, m), Shape::Laguerre { nu, m })
            })
            .collect());
    }
    let (s, c) = (lam.sin(), lam.cos());
    let g_plus = gamma(1.0 + kappa)?;
    let g_minus = gamma(1.0 - kappa)?;
    let mut roots: Vec<f64> = Vec::with_capacity(m_max as usize + 1);

    // Below B₀ = γ(1−κ): ω/ω₋ = cos λ + sin λ·Γ(1+κ)/Γ(1−κ)·Γ(α₋)/Γ(α₊) has
    // the sign of sin λ at B₀ and of cos λ at −∞.
    let b0 = gam * (1.0 - kappa);
    let mut lowest_ratio = None;
    if s * c < 0.0 {
        let h = |y: f64| {
            let t = y.exp();
            c + s * g_plus / g_minus * ln_gamma_ratio(t, 0.0, kappa).map(f64::exp).unwrap_or(f64::INFINITY)
        };
        let mut lo = -40.0;
        while h(lo).signum() != s.signum() {
            lo -= 20.0;
            if lo < -700.0 {
                return Err(Error::NoConvergence { lo: b0 - 2.0 * gam * lo.exp(), hi: b0 });
            }
        }
        let mut hi = 0.0;
        while h(hi).signum() != c.signum() {
            hi += 2.0;
            if hi > 690.0 {
                return Err(Error::OutOfRange(format!(
                    "lowest level for lambda = {lam} lies below -1e300 (angle too close to -pi/2)"
                )));
            }
        }
        let y = brent(h, lo, hi, h(lo), h(hi), 1e-15, 0.0)?;
        let t = y.exp();
        let w = b0 - 2.0 * gam * t;
        if !w.is_finite() {
            return Err(Error::OutOfRange(format!("lowest level for lambda = {lam} is not representable")));
        }
        roots.push(w);
        // ω₊/ω₋ at the root, from the log-ratio.
        lowest_ratio = Some(g_plus / g_minus * ln_gamma_ratio(t, 0.0, kappa)?.exp());
    }

    // Ladder nodes B_k = γ(1−κ+2k) (ω₋ = 0) and A_k = γ(1+κ+2k) (ω₊ = 0);
    // node values use the exact Γ arguments.
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    let mut k = 0u32;
    while roots.len() + nodes.len() / 2 <= m_max as usize + 2 {
        let kf = k as f64;
        nodes.push((gam * (1.0 - kappa + 2.0 * kf), s * g_plus * gamma_reciprocal(kappa - kf)));
        nodes.push((gam * (1.0 + kappa + 2.0 * kf), c * g_minus * gamma_reciprocal(-kappa - kf)));
        k += 1;
    }
    let f = |w: f64| omega_lambda_a(w, lam, kappa, gam);
    for pair in nodes.windows(2) {
        if roots.len() > m_max as usize {
            break;
        }
        let ((a, fa), (b, fb)) = (pair[0], pair[1]);
        if fa.signum() != fb.signum() {
            roots.push(brent(f, a, b, fa, fb, 1e-13 * gam, 4.0 * f64::EPSILON)?);
        }
    }
    if roots.len() <= m_max as usize {
        return Err(Error::NoConvergence { lo: b0, hi: nodes.last().map_or(b0, |n| n.0) });
    }

    let sqrt2g = (2.0 * gam).sqrt();
    roots
        .iter()
        .take(m_max as usize + 1)
        .enumerate()
        .map(|(m, &w)| {
            let (tilde, deriv, scale_den) = match (m, lowest_ratio) {
                (0, Some(r)) => {
                    // Everything divided by ω₋ (positive below B₀).
                    let x = 0.5 - 0.5 * w / gam;
                    let (ap, am) = (x + 0.5 * kappa, x - 0.5 * kappa);
                    let tilde = r * c - s;
                    let deriv = (s * r * digamma(ap)? + c * digamma(am)?) / (2.0 * gam);
                    let ln_omega_minus = g_minus.ln() - ln_gamma(am)?;
                    (tilde, deriv, Some(ln_omega_minus))
                }
                _ => {
                    let (dp, dm) = omega_pm_deriv(w, kappa, gam);
                    (omega_tilde_lambda_a(w, lam, kappa, gam), s * dp + c * dm, None)
                }
            };
            let weight = (tilde.abs() / (sqrt2g * kappa * deriv.abs())).sqrt();
            // U = Q·κχ/ω̃ with χ = g z^{κ/2} U(α₊, 1+κ; z).
            let scale = match scale_den {
                Some(ln_om) => weight * kappa / tilde * (-ln_om).exp(),
                None => weight * kappa / tilde,
            };
            let a = 0.5 + 0.5 * kappa - 0.5 * w / gam;
            Ok(level(m as u32, w, weight, Shape::DecayingPower { kappa, a, scale }))
        })
        .collect()
}

fn third_region(tag: RegionTag, gam: f64, lam: Angle, m_max: u32) -> Result<Vec<MsLevel>> {
    let level = |m: u32, w: f64, weight: f64, shape: Shape| MsLevel {
        l: 0,
        m,
        energy: w,
        weight,
        tag,
        lambda: Some(lam),
        gamma: gam,
        shape,
    };
    let Some(t) = lam.tan() else {
        return Ok((0..=m_max)
            .map(|m| {
                let w = gam * (1.0 + 2.0 * m as f64);
                level(m, w, weight_first_region(gam, 0.0, m), Shape::Laguerre { nu: 0.0, m })
            })
            .collect());
    };
    // Zeros in x = α₀ of ψ(x) − 2ψ(1) − 2 tan λ: one for x > 0 and one in
    // each (−k−1, −k); then W = γ(1 − 2x).
    let target = 2.0 * PSI_ONE + 2.0 * t;
    let f = |x: f64| digamma(x).map(|v| v - target).unwrap_or(f64::NAN);
    let mut xs = Vec::with_capacity(m_max as usize + 1);
    let (mut lo, mut hi) = (1.0, 1.0);
    while f(lo) > 0.0 {
        lo *= 0.5;
    }
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::OutOfRange(format!(
                "lowest level for lambda = {lam} lies below -1e300 (angle too close to pi/2)"
            )));
        }
    }
    xs.push(brent(f, lo, hi, f(lo), f(hi), 0.0, 4.0 * f64::EPSILON)?);
    for k in 0..m_max {
        let kf = k as f64;
        let delta = 1e-12 * (kf + 1.0);
        let (a, b) = (-kf - 1.0 + delta, -kf - delta);
        let (fa, fb) = (f(a), f(b));
        let x = if fa > 0.0 {
            a
        } else if fb < 0.0 {
            b
        } else {
            brent(f, a, b, fa, fb, 1e-15, 4.0 * f64::EPSILON)?
        };
        xs.push(x);
    }
    let c = lam.cos();
    let g2 = (2.0 * gam).powf(0.25);
    xs.iter()
        .enumerate()
        .map(|(m, &a)| {
            let w = gam * (1.0 - 2.0 * a);
            let tri = trigamma(a)?;
            let weight = 2.0 * g2 / (c.abs() * tri.sqrt());
            let scale = -c.signum() * g2 * gamma(a)? / tri.sqrt();
            Ok(level(m as u32, w, weight, Shape::DecayingLog { a, scale }))
        })
        .collect()
}

/// U⁽²⁾ evaluated from its definition Q[u₊ sin λ + u₋ cos λ] at shifted
/// energy `tau`; the weight is recomputed from ω̃/ω′ at `tau`.
pub fn eigenfunction_u2(a: i64, mu: f64, gam: f64, lambda: Angle, tau: f64, rho: f64) -> Result<f64> {
    let kappa = (a as f64 + mu).abs();
    let (dp, dm) = omega_pm_deriv(tau, kappa, gam);
    let deriv = lambda.sin() * dp + lambda.cos() * dm;
    let tilde = omega_tilde_lambda_a(tau, lambda, kappa, gam);
    let q = (tilde.abs() / ((2.0 * gam).sqrt() * kappa * deriv.abs())).sqrt();
    let z = 0.5 * gam * rho * rho;
    let g = (0.5 * gam).powf(0.25) * rho.sqrt() * (-0.5 * z).exp();
    let x = 0.5 - 0.5 * tau / gam;
    let up = g * z.powf(0.5 * kappa) * crate::specfun::kummer_m(x + 0.5 * kappa, 1.0 + kappa, z)?;
    let um = g * z.powf(-0.5 * kappa) * crate::specfun::kummer_m(x - 0.5 * kappa, 1.0 - kappa, z)?;
    Ok(q * (up * lambda.sin() + um * lambda.cos()))
}

/// U⁽³⁾ evaluated from its series form Q[u₁ sin λ + u₃ cos λ] at energy
/// `energy`, where u₃ = ∂_κ u₊ at κ = 0 = u₁ ln(√(γ/2)ρ) + ½ g ∂_μM.
pub fn eigenfunction_u3(lambda: Angle, gam: f64, energy: f64, rho: f64) -> Result<f64> {
    let a0 = 0.5 - 0.5 * energy / gam;
    let z = 0.5 * gam * rho * rho;
    let g = (0.5 * gam).powf(0.25) * rho.sqrt() * (-0.5 * z).exp();
    let u1 = g * crate::specfun::kummer_m(a0, 1.0, z)?;
    let u3 = u1 * ((0.5 * gam).sqrt() * rho).ln() + 0.5 * g * crate::specfun::kummer_m_dmu_at0(a0, z)?;
    let c = lambda.cos();
    if c == 0.0 {
        return Ok(eigenfunction_u1(0, 0.0, gam, ((energy / gam - 1.0) / 2.0).round() as u32, rho));
    }
    let q = 2.0 * (2.0 * gam).powf(0.25) / (c.abs() * trigamma(a0)?.sqrt());
    Ok(q * (u1 * lambda.sin() + u3 * c))
}
