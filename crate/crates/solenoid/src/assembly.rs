//! Full 2D/3D spectra and eigenfunctions assembled from the radial
//! problems, and expansion of test functions over eigenbases.
//!
//! Schrödinger energies are reported in physical units E = ℰ/M_s with
//! M_s = 2m_e/ħ² (ħ = 1 throughout); along the field a plane wave adds
//! p_z²/M_s. Dirac energies need no rescaling.

use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_complex::Complex64;

use crate::ab_radial::{self, BoundState, FluxConfig};
use crate::angle::Angle;
use crate::dirac_radial::{self, DiracLevel, DiracParams, Doublet};
use crate::error::{Error, Result};
use crate::ms_radial::{self, MsLevel};
use crate::verify::{quad_semi_infinite, QuadratureConfig};
use crate::Region;

/// n(l, m) = m for l ≤ −1 and m + l for l ≥ 0.
pub fn index_map(l: i64, m: u64) -> u64 {
    if l < 0 {
        m
    } else {
        m + l as u64
    }
}

/// Inverse of [`index_map`]; for l ≥ 0 requires l ≤ n.
pub fn index_unmap(n: u64, l: i64) -> Result<u64> {
    if l < 0 {
        Ok(n)
    } else if (l as u64) <= n {
        Ok(n - l as u64)
    } else {
        Err(Error::InvalidParameter(format!("no level n = {n} in channel l = {l} (needs 0 <= l <= n)")))
    }
}

/// Angle-valued function of a channel or spin label and p_z.
pub type AngleFn<K> = Arc<dyn Fn(K, f64) -> Option<Angle> + Send + Sync>;

/// Which self-adjoint extension to use in every channel that admits a
/// family of them. Constant angles cover the 2D problems; the optional
/// hooks make them depend on p_z (Schrödinger, keyed by l) or on (s, p_z)
/// (Dirac).
#[derive(Clone, Default)]
pub struct ExtensionChoice {
    /// Angle for l = 0 (the only extended channel when μ = 0).
    pub lambda0: Option<Angle>,
    /// Angle for l = −1 (μ > 0 only).
    pub lambda_m1: Option<Angle>,
    pub per_pz: Option<AngleFn<i64>>,
    pub dirac: Option<AngleFn<i8>>,
}

impl fmt::Debug for ExtensionChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtensionChoice")
            .field("lambda0", &self.lambda0)
            .field("lambda_m1", &self.lambda_m1)
            .field("per_pz", &self.per_pz.is_some())
            .field("dirac", &self.dirac.is_some())
            .finish()
    }
}

impl ExtensionChoice {
    pub fn constant(lambda0: Option<Angle>, lambda_m1: Option<Angle>) -> Self {
        ExtensionChoice { lambda0, lambda_m1, ..Default::default() }
    }

    pub fn with_pz(mut self, f: impl Fn(i64, f64) -> Option<Angle> + Send + Sync + 'static) -> Self {
        self.per_pz = Some(Arc::new(f));
        self
    }

    pub fn with_dirac(mut self, f: impl Fn(i8, f64) -> Option<Angle> + Send + Sync + 'static) -> Self {
        self.dirac = Some(Arc::new(f));
        self
    }

    /// Angle for Schrödinger channel l at longitudinal momentum p_z.
    pub fn channel_angle(&self, l: i64, p_z: f64) -> Option<Angle> {
        if let Some(f) = &self.per_pz {
            if let Some(a) = f(l, p_z) {
                return Some(a);
            }
        }
        match l {
            0 => self.lambda0,
            -1 => self.lambda_m1,
            _ => None,
        }
    }

    /// Angle for the Dirac third-region channel with spin s at p_z; falls
    /// back to `lambda0`.
    pub fn dirac_angle(&self, s: i8, p_z: f64) -> Option<Angle> {
        self.dirac.as_ref().and_then(|f| f(s, p_z)).or(self.lambda0)
    }
}

/// Piecewise-linear λ(p_z) from sampled (p_z, λ) pairs, constant beyond
/// the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTable {
    points: Vec<(f64, f64)>,
}

impl AngleTable {
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() || points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::InvalidParameter("angle table needs finite (p_z, lambda) rows".into()));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(AngleTable { points })
    }

    pub fn at(&self, p_z: f64) -> Result<Angle> {
        let pts = &self.points;
        let i = pts.partition_point(|p| p.0 <= p_z);
        let v = if i == 0 {
            pts[0].1
        } else if i == pts.len() {
            pts[pts.len() - 1].1
        } else {
            let ((x0, y0), (x1, y1)) = (pts[i - 1], pts[i]);
            y0 + (y1 - y0) * (p_z - x0) / (x1 - x0)
        };
        Angle::new(v)
    }
}

fn phase(eps: i8, phi0: i64, l: i64, phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, eps as f64 * (phi0 - l) as f64 * phi)
}

/// A level of the 2D magnetic-solenoid Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level2D {
    pub n: u64,
    pub l: i64,
    pub m: u64,
    /// E = ℰ/M_s.
    pub energy: f64,
    pub region: Region,
    pub lambda: Option<Angle>,
    pub radial: MsLevel,
    eps: i8,
    phi0: i64,
}

impl Level2D {
    /// Ψ(ρ, φ) = (2πρ)^{−1/2} e^{iε(φ₀−l)φ} U(ρ).
    pub fn eval(&self, rho: f64, phi: f64) -> Complex64 {
        phase(self.eps, self.phi0, self.l, phi) * (self.radial.eval(rho) / (2.0 * PI * rho).sqrt())
    }
}

fn check_ms(cfg: &FluxConfig, m_s: f64) -> Result<()> {
    if !(cfg.gamma > 0.0) {
        return Err(Error::InvalidParameter("gamma = 0 is the pure AB field; use spectrum_2d_ab".into()));
    }
    check_ms_scale(m_s)
}

fn check_ms_scale(m_s: f64) -> Result<()> {
    if m_s > 0.0 && m_s.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("M_s must be positive, got {m_s}")))
    }
}

fn levels_2d(cfg: &FluxConfig, m_s: f64, l: i64, lambda: Option<Angle>, n_max: u64) -> Result<Vec<Level2D>> {
    if l >= 0 && l as u64 > n_max {
        return Ok(Vec::new());
    }
    let m_max = index_unmap(n_max, l)?;
    let m_max = u32::try_from(m_max).map_err(|_| Error::InvalidParameter(format!("n_max {n_max} too large")))?;
    let radial = ms_radial::discrete_spectrum(l, cfg, lambda, m_max)?;
    Ok(radial
        .into_iter()
        .map(|r| Level2D {
            n: index_map(l, r.m as u64),
            l,
            m: r.m as u64,
            energy: r.energy / m_s,
            region: r.tag.region,
            lambda: r.lambda,
            radial: r,
            eps: cfg.eps,
            phi0: cfg.phi0,
        })
        .collect())
}

/// Levels with n ≤ n_max of the 2D magnetic-solenoid Hamiltonian over the
/// channels `ls`, ordered by (n, l).
pub fn spectrum_2d(
    cfg: &FluxConfig,
    choice: &ExtensionChoice,
    m_s: f64,
    ls: RangeInclusive<i64>,
    n_max: u64,
) -> Result<Vec<Level2D>> {
    check_ms(cfg, m_s)?;
    let mut out = Vec::new();
    for l in ls {
        out.extend(levels_2d(cfg, m_s, l, choice.channel_angle(l, 0.0), n_max)?);
    }
    out.sort_by_key(|v| (v.n, v.l));
    Ok(out)
}

/// Lower edge of the 3D magnetic-solenoid continuum, γ/M_s.
pub fn ms_continuum_onset(cfg: &FluxConfig, m_s: f64) -> f64 {
    cfg.gamma / m_s
}

/// A negative level of the 2D AB Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbBound2D {
    pub l: i64,
    /// E = ℰ/M_s.
    pub energy: f64,
    pub state: BoundState,
    eps: i8,
    phi0: i64,
}

impl AbBound2D {
    pub fn eval(&self, rho: f64, phi: f64) -> Complex64 {
        phase(self.eps, self.phi0, self.l, phi) * (self.state.eval(rho) / (2.0 * PI * rho).sqrt())
    }
}

/// Spectrum of the 2D AB Hamiltonian: [0, ∞) plus up to two negative
/// levels.
#[derive(Debug, Clone, PartialEq)]
pub struct AbSpectrum2D {
    pub continuum_from: f64,
    pub bound: Vec<AbBound2D>,
}

/// 2D AB spectrum (γ = 0) at p_z; the angle of each extended channel comes
/// from `choice.channel_angle(l, p_z)`.
fn ab_spectrum_at(cfg: &FluxConfig, choice: &ExtensionChoice, m_s: f64, p_z: f64) -> Result<AbSpectrum2D> {
    if cfg.gamma != 0.0 {
        return Err(Error::InvalidParameter("the AB spectrum needs gamma = 0".into()));
    }
    check_ms_scale(m_s)?;
    let mut bound = Vec::new();
    for l in cfg.extension_channels() {
        let lambda = choice.channel_angle(l, p_z).ok_or(Error::MissingExtension { l })?;
        if let Some(state) = ab_radial::bound_state(l, cfg, lambda)? {
            bound.push(AbBound2D { l, energy: state.energy / m_s, state, eps: cfg.eps, phi0: cfg.phi0 });
        }
    }
    bound.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(AbSpectrum2D { continuum_from: 0.0, bound })
}

pub fn spectrum_2d_ab(cfg: &FluxConfig, choice: &ExtensionChoice, m_s: f64) -> Result<AbSpectrum2D> {
    ab_spectrum_at(cfg, choice, m_s, 0.0)
}

/// Continuum eigenfunction of the 2D AB Hamiltonian at physical energy E,
/// normalized to δ(E − E′): √M_s (2πρ)^{−1/2} e^{iε(φ₀−l)φ} U_{M_s E}(ρ).
pub fn ab_continuum_2d(
    cfg: &FluxConfig,
    choice: &ExtensionChoice,
    m_s: f64,
    l: i64,
    energy: f64,
    rho: f64,
    phi: f64,
) -> Result<Complex64> {
    check_ms_scale(m_s)?;
    let u = ab_radial::continuous_eigenfunction(l, cfg, choice.channel_angle(l, 0.0), m_s * energy, rho)?;
    Ok(phase(cfg.eps, cfg.phi0, l, phi) * (m_s.sqrt() * u / (2.0 * PI * rho).sqrt()))
}

/// A level of the 3D magnetic-solenoid Hamiltonian on the p_z fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level3D {
    pub p_z: f64,
    /// E = E^⊥ + p_z²/M_s.
    pub energy: f64,
    pub transverse: Level2D,
}

impl Level3D {
    /// (2π)^{−1/2} e^{ip_z z} Ψ^⊥(ρ, φ).
    pub fn eval(&self, rho: f64, phi: f64, z: f64) -> Complex64 {
        Complex64::from_polar((2.0 * PI).sqrt().recip(), self.p_z * z) * self.transverse.eval(rho, phi)
    }
}

/// Discrete branches of the 3D magnetic-solenoid Hamiltonian at the
/// sampled p_z; the extension angles may depend on p_z. Ordered by
/// (p_z sample, n, l).
pub fn spectrum_3d(
    cfg: &FluxConfig,
    choice: &ExtensionChoice,
    m_s: f64,
    p_z: &[f64],
    ls: RangeInclusive<i64>,
    n_max: u64,
) -> Result<Vec<Level3D>> {
    check_ms(cfg, m_s)?;
    let mut out = Vec::new();
    for &pz in p_z {
        let mut fiber = Vec::new();
        for l in ls.clone() {
            fiber.extend(levels_2d(cfg, m_s, l, choice.channel_angle(l, pz), n_max)?);
        }
        fiber.sort_by_key(|v| (v.n, v.l));
        out.extend(fiber.into_iter().map(|t| Level3D { p_z: pz, energy: t.energy + pz * pz / m_s, transverse: t }));
    }
    Ok(out)
}

/// Negative branches p_z²/M_s + E^{(−)}(p_z) of the 3D AB Hamiltonian.
pub fn spectrum_3d_ab(
    cfg: &FluxConfig,
    choice: &ExtensionChoice,
    m_s: f64,
    p_z: &[f64],
) -> Result<Vec<(f64, AbBound2D, f64)>> {
    let mut out = Vec::new();
    for &pz in p_z {
        for b in ab_spectrum_at(cfg, choice, m_s, pz)?.bound {
            out.push((pz, b, b.energy + pz * pz / m_s));
        }
    }
    Ok(out)
}

/// S_l(φ) = e^{iε(φ₀−l+1/2)φ} antidiag(i e^{iφ/2}, −e^{−iφ/2}) as rows.
pub fn s_matrix(eps: i8, phi0: i64, l: i64, phi: f64) -> [[Complex64; 2]; 2] {
    let ph = Complex64::from_polar(1.0, eps as f64 * ((phi0 - l) as f64 + 0.5) * phi);
    let zero = Complex64::new(0.0, 0.0);
    let upper = ph * Complex64::i() * Complex64::from_polar(1.0, 0.5 * phi);
    let lower = -ph * Complex64::from_polar(1.0, -0.5 * phi);
    [[zero, upper], [lower, zero]]
}

/// e_s(p_z): e₁ = (√((M+m_e)/2M), p_z/√(2M(M+m_e))), e₋₁ = −iσ²e₁.
pub fn spin_basis(s: i8, m_e: f64, p_z: f64) -> [f64; 2] {
    let m = m_e.hypot(p_z);
    let e1 = [((m + m_e) / (2.0 * m)).sqrt(), p_z / (2.0 * m * (m + m_e)).sqrt()];
    if s == 1 {
        e1
    } else {
        [-e1[1], e1[0]]
    }
}

/// A normalized Dirac four-spinor
/// (2π√ρ)^{−1} e^{ip_z z} S_l(φ)F(ρ) ⊗ e_s(p_z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracSpinor {
    pub level: DiracLevel,
    pub phi0: i64,
}

impl DiracSpinor {
    pub fn eval(&self, rho: f64, phi: f64, z: f64) -> Result<[Complex64; 4]> {
        let p = &self.level.params;
        let d = self.level.eval(rho)?;
        let s = s_matrix(p.eps, self.phi0, p.l, phi);
        let pre = Complex64::from_polar(1.0 / (2.0 * PI * rho.sqrt()), p.p_z * z);
        let chi = [pre * (s[0][0] * d.f + s[0][1] * d.g), pre * (s[1][0] * d.f + s[1][1] * d.g)];
        let e = spin_basis(p.s, p.m_e, p.p_z);
        Ok([chi[0] * e[0], chi[1] * e[0], chi[0] * e[1], chi[1] * e[1]])
    }
}

pub fn dirac_spinor(level: DiracLevel, phi0: i64) -> DiracSpinor {
    DiracSpinor { level, phi0 }
}

/// Common parameters of a family of radial Dirac operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracFamily {
    pub m_e: f64,
    pub mu: f64,
    pub gamma: f64,
    pub eps: i8,
}

/// One branch level of the full Dirac spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracBranchLevel {
    pub s: i8,
    pub l: i64,
    pub p_z: f64,
    pub level: DiracLevel,
}

/// Dirac levels over s = ±1, the channels `ls` and the sampled p_z, with
/// `window` radial levels per sign and branch. The third-region channel
/// (l = 0, μ > 0) takes its angle from `choice.dirac_angle(s, p_z)`.
/// Ordered by (p_z sample, s descending, l, energy).
pub fn dirac_full_spectrum(
    fam: &DiracFamily,
    choice: &ExtensionChoice,
    p_z: &[f64],
    ls: RangeInclusive<i64>,
    window: u64,
) -> Result<Vec<DiracBranchLevel>> {
    let mut out = Vec::new();
    for &pz in p_z {
        for s in [1i8, -1] {
            for l in ls.clone() {
                let p = DiracParams::new(fam.m_e, pz, s, l, fam.mu, fam.gamma, fam.eps)?;
                let lambda = if p.region() == Region::R3 { choice.dirac_angle(s, pz) } else { None };
                for level in dirac_radial::spectrum(&p, lambda, window)? {
                    out.push(DiracBranchLevel { s, l, p_z: pz, level });
                }
            }
        }
    }
    Ok(out)
}

/// Coefficients ∫₀^∞ ψ(ρ)u_k(ρ)dρ of a radial profile over a real
/// orthonormal family.
pub fn expand<F, B>(psi: F, basis: &[B], cfg: &QuadratureConfig) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    basis.iter().map(|u| Ok(quad_semi_infinite(|r| psi(r) * u(r), cfg)?.value)).collect()
}

/// Doublet version of [`expand`]: ∫(ψ_f u_f + ψ_g u_g)dρ.
pub fn expand_doublets<F, B>(psi: F, basis: &[B], cfg: &QuadratureConfig) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Doublet,
    B: Fn(f64) -> Doublet,
{
    basis
        .iter()
        .map(|u| {
            let v = quad_semi_infinite(
                |r| {
                    let (a, b) = (psi(r), u(r));
                    a.f * b.f + a.g * b.g
                },
                cfg,
            )?;
            Ok(v.value)
        })
        .collect()
}

/// Σ c_k u_k.
pub fn reconstruct<'a, B: Fn(f64) -> f64>(coefficients: &'a [f64], basis: &'a [B]) -> impl Fn(f64) -> f64 + 'a {
    let basis: Vec<&B> = basis.iter().collect();
    move |r| coefficients.iter().zip(&basis).map(|(c, u)| c * u(r)).sum()
}

/// Relative Parseval defect |‖ψ‖² − Σc² − ∫|Φ(E)|²dE| / ‖ψ‖²; pass an empty
/// `continuum` for purely discrete bases.
pub fn parseval_gap(norm_sqr: f64, discrete: &[f64], continuum: &[(f64, f64)]) -> f64 {
    let disc: f64 = discrete.iter().map(|c| c * c).sum();
    let cont: f64 = continuum
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 * w[0].1 + w[1].1 * w[1].1))
        .sum();
    (norm_sqr - disc - cont).abs() / norm_sqr
}

/// Continuum coefficients Φ(ℰ) = ∫ψ U_ℰ dρ of an AB channel on the given
/// energy grid (operator units).
pub fn expand_ab_continuum<F: Fn(f64) -> f64>(
    psi: F,
    l: i64,
    cfg: &FluxConfig,
    lambda: Option<Angle>,
    energies: &[f64],
    qcfg: &QuadratureConfig,
) -> Result<Vec<(f64, f64)>> {
    energies
        .iter()
        .map(|&e| {
            let v = quad_semi_infinite(
                |r| psi(r) * ab_radial::continuous_eigenfunction(l, cfg, lambda, e, r).unwrap_or(f64::NAN),
                qcfg,
            )?;
            Ok((e, v.value))
        })
        .collect()
}
