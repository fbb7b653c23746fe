//! Radial Dirac problem in the magnetic-solenoid field.
//!
//! For spin label s and orbital number l the doublet F = (f, g) solves
//! f′ − ε(γρ/2 + κ_l/ρ)f + (W − sM)g = 0,
//! g′ + ε(γρ/2 + κ_l/ρ)g − (W + sM)f = 0,
//! with κ_l = l + μ − 1/2 and M = √(m_e² + p_z²). All closed-form work is
//! done for ε = +1; the ε = −1 problem with spin s is the image of the
//! ε = +1 problem with spin −s under (f, g) ↦ (g, −f).

use std::ops::RangeInclusive;

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::roots::brent;
use crate::specfun::{gamma, gamma_reciprocal, kummer_m, kummer_m_over_gamma_beta, ln_gamma, tricomi_u};
use crate::verify::bc_fit_doublet;
use crate::Region;

/// Upper and lower radial components.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct Doublet {
    pub f: f64,
    pub g: f64,
}

impl Doublet {
    pub fn new(f: f64, g: f64) -> Self {
        Doublet { f, g }
    }

    pub fn scaled(self, c: f64) -> Self {
        Doublet { f: c * self.f, g: c * self.g }
    }

    /// (f, g) ↦ (g, −f).
    pub fn flipped(self) -> Self {
        Doublet { f: self.g, g: -self.f }
    }

    pub fn norm_sqr(self) -> f64 {
        self.f * self.f + self.g * self.g
    }
}

impl std::ops::Add for Doublet {
    type Output = Doublet;
    fn add(self, o: Doublet) -> Doublet {
        Doublet { f: self.f + o.f, g: self.g + o.g }
    }
}

impl std::ops::Sub for Doublet {
    type Output = Doublet;
    fn sub(self, o: Doublet) -> Doublet {
        Doublet { f: self.f - o.f, g: self.g - o.g }
    }
}

/// Wr(F, G) = f_F g_G − g_F f_G.
pub fn wronskian(a: Doublet, b: Doublet) -> f64 {
    a.f * b.g - a.g * b.f
}

/// Parameters of one radial Dirac operator ĥ(s, l, p_z).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DiracParams {
    pub m_e: f64,
    pub p_z: f64,
    pub s: i8,
    pub l: i64,
    pub mu: f64,
    pub gamma: f64,
    pub eps: i8,
}

impl DiracParams {
    pub fn new(m_e: f64, p_z: f64, s: i8, l: i64, mu: f64, gamma: f64, eps: i8) -> Result<Self> {
        let bad = |what: String| Err(Error::InvalidParameter(what));
        if !(m_e > 0.0 && m_e.is_finite()) {
            return bad(format!("m_e must be positive, got {m_e}"));
        }
        if !p_z.is_finite() {
            return bad(format!("p_z must be finite, got {p_z}"));
        }
        if s != 1 && s != -1 {
            return bad(format!("s must be +1 or -1, got {s}"));
        }
        if eps != 1 && eps != -1 {
            return bad(format!("eps must be +1 or -1, got {eps}"));
        }
        if !(0.0..1.0).contains(&mu) {
            return bad(format!("mu must lie in [0, 1), got {mu}"));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return bad(format!("gamma must be positive, got {gamma}"));
        }
        Ok(DiracParams { m_e, p_z, s, l, mu, gamma, eps })
    }

    /// M = √(m_e² + p_z²).
    pub fn mass(&self) -> f64 {
        self.m_e.hypot(self.p_z)
    }

    /// κ_l = l + μ − 1/2.
    pub fn kappa_l(&self) -> f64 {
        self.l as f64 + self.mu - 0.5
    }

    /// w = W² − M².
    pub fn w(&self, energy: f64) -> f64 {
        let m = self.mass();
        (energy - m) * (energy + m)
    }

    /// M_k = √(M² + 2γk); M₀ = M exactly.
    pub fn mass_level(&self, k: f64) -> f64 {
        if k == 0.0 {
            self.mass()
        } else {
            (self.mass().powi(2) + 2.0 * self.gamma * k).sqrt()
        }
    }

    /// R1 for l + μ ≤ 0, R2 for l ≥ 1, R3 for l = 0 with μ > 0.
    pub fn region(&self) -> Region {
        if self.l as f64 + self.mu <= 0.0 {
            Region::R1
        } else if self.l >= 1 {
            Region::R2
        } else {
            Region::R3
        }
    }

    /// Exponent of the third-region boundary condition, μ − 1/2.
    pub fn kappa0(&self) -> f64 {
        self.mu - 0.5
    }

    /// The ε = +1 operator whose image under (f, g) ↦ (g, −f) is this one.
    fn positive_frame(&self) -> DiracParams {
        if self.eps == 1 {
            *self
        } else {
            DiracParams { s: -self.s, eps: 1, ..*self }
        }
    }

    fn beta1(&self) -> f64 {
        1.0 - self.l as f64 - self.mu
    }

    fn beta2(&self) -> f64 {
        self.l as f64 + self.mu
    }

    fn sm(&self) -> f64 {
        self.s as f64 * self.mass()
    }
}

/// Replaces α by the nonpositive integer it is within 1e-10 of.
fn snap(alpha: f64) -> f64 {
    let r = alpha.round();
    if r <= 0.0 && (alpha - r).abs() < 1e-10 {
        r
    } else {
        alpha
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")))
    }
}

// F₁, F₂, F₃ in the ε = +1 frame with α₁ supplied.

fn f1_at(p: &DiracParams, energy: f64, alpha1: f64, rho: f64) -> Result<Doublet> {
    let b1 = p.beta1();
    let z = 0.5 * p.gamma * rho * rho;
    let pre = rho.powf(b1 - 0.5) * (-0.5 * z).exp();
    let ws = energy - p.sm();
    let upper = if ws == 0.0 { 0.0 } else { -ws * rho / (2.0 * b1) * kummer_m(alpha1 + 1.0, b1 + 1.0, z)? };
    Ok(Doublet::new(pre * upper, pre * kummer_m(alpha1, b1, z)?))
}

fn f2_at(p: &DiracParams, energy: f64, alpha2: f64, rho: f64) -> Result<Doublet> {
    let b2 = p.beta2();
    let z = 0.5 * p.gamma * rho * rho;
    let pre = rho.powf(b2 - 0.5) * (-0.5 * z).exp();
    let lower = (energy + p.sm()) * rho / (2.0 * b2) * kummer_m(alpha2, b2 + 1.0, z)?;
    Ok(Doublet::new(pre * kummer_m(alpha2, b2, z)?, pre * lower))
}

fn f3_at(p: &DiracParams, energy: f64, alpha1: f64, rho: f64) -> Result<Doublet> {
    let b1 = p.beta1();
    let z = 0.5 * p.gamma * rho * rho;
    if z > 1500.0 {
        return Ok(Doublet::default());
    }
    if z < 1e-20 {
        let (w1, w2) = omegas(p, energy)?;
        let a2 = alpha1 + p.beta2();
        return Ok(f1_at(p, energy, alpha1, rho)?.scaled(w2) - f2_at(p, energy, a2, rho)?.scaled(w1));
    }
    let pre = rho.powf(b1 - 0.5) * (-0.5 * z).exp();
    let upper = 0.5 * (energy - p.sm()) * rho * tricomi_u(alpha1 + 1.0, b1 + 1.0, z)?;
    Ok(Doublet::new(pre * upper, pre * tricomi_u(alpha1, b1, z)?))
}

fn alpha1(p: &DiracParams, energy: f64) -> f64 {
    snap(-p.w(energy) / (2.0 * p.gamma))
}

fn alpha2(p: &DiracParams, energy: f64) -> f64 {
    snap(p.beta2() - p.w(energy) / (2.0 * p.gamma))
}

fn in_frame(p: &DiracParams, value: impl FnOnce(&DiracParams) -> Result<Doublet>) -> Result<Doublet> {
    let d = value(&p.positive_frame())?;
    Ok(if p.eps == 1 { d } else { d.flipped() })
}

/// F₁: the solution behaving as ρ^{1/2−l−μ}(−(W−sM)ρ/2β₁, 1) at the origin,
/// β₁ = 1 − l − μ.
pub fn solution_f1(p: &DiracParams, energy: f64, rho: f64) -> Result<Doublet> {
    check_rho(rho)?;
    in_frame(p, |q| f1_at(q, energy, alpha1(q, energy), rho))
}

/// F₂: the solution behaving as ρ^{l+μ−1/2}(1, (W+sM)ρ/2β₂) at the origin,
/// β₂ = l + μ. Fails when β₂ is a nonpositive integer; see
/// [`solution_f2_regularized`].
pub fn solution_f2(p: &DiracParams, energy: f64, rho: f64) -> Result<Doublet> {
    check_rho(rho)?;
    in_frame(p, |q| f2_at(q, energy, alpha2(q, energy), rho))
}

/// F₂/Γ(β₂), finite for every β₂.
pub fn solution_f2_regularized(p: &DiracParams, energy: f64, rho: f64) -> Result<Doublet> {
    check_rho(rho)?;
    in_frame(p, |q| {
        let b2 = q.beta2();
        let a2 = alpha2(q, energy);
        let z = 0.5 * q.gamma * rho * rho;
        let pre = rho.powf(b2 - 0.5) * (-0.5 * z).exp();
        // (W+sM)ρ/(2β₂Γ(β₂)) M(α₂, β₂+1) = (W+sM)ρ/2 · M(α₂, β₂+1)/Γ(β₂+1)
        let lower = 0.5 * (energy + q.sm()) * rho * kummer_m_over_gamma_beta(a2, b2 + 1.0, z);
        Ok(Doublet::new(pre * kummer_m_over_gamma_beta(a2, b2, z), pre * lower))
    })
}

/// F₃ = ω₂F₁ − ω₁F₂, the solution decaying at infinity.
pub fn solution_f3(p: &DiracParams, energy: f64, rho: f64) -> Result<Doublet> {
    check_rho(rho)?;
    in_frame(p, |q| f3_at(q, energy, alpha1(q, energy), rho))
}

/// (ω₁, ω₂) = (Wr(F₁, F₃), Wr(F₂, F₃)):
/// ω₁ = −(γ/2)^{β₂}Γ(β₁)(W−sM)/(γΓ(α₁+1)), ω₂ = Γ(β₂)/Γ(α₂).
pub fn omegas(p: &DiracParams, energy: f64) -> Result<(f64, f64)> {
    let q = p.positive_frame();
    let a1 = alpha1(&q, energy);
    let w1 = -(0.5 * q.gamma).powf(q.beta2()) * gamma(q.beta1())? * (energy - q.sm()) / q.gamma
        * gamma_reciprocal(a1 + 1.0);
    let w2 = gamma(q.beta2())? * gamma_reciprocal(alpha2(&q, energy));
    Ok((w1, w2))
}

/// One discrete level of ĥ(s, l, p_z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracLevel {
    /// Signed index: 𝔫(s) in the first and second regions (n = σ|𝔫|, with
    /// σ carried separately for 𝔫 = 0), k ∈ ℤ in the third (k ≥ 0 for
    /// E > 0 ascending, k < 0 for E < 0 descending).
    pub n: i64,
    pub sigma: i8,
    pub energy: f64,
    /// Q: the eigen-doublet is Q·F₁ (first region), Q·F₂ (second region)
    /// or Q·F_(λ) (third region).
    pub weight: f64,
    pub region: Region,
    pub lambda: Option<Angle>,
    pub params: DiracParams,
    shape: Shape,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    First { alpha1: f64, scale: f64 },
    Second { alpha2: f64, scale: f64 },
    Decaying { scale: f64 },
}

impl DiracLevel {
    /// Normalized eigen-doublet at ρ.
    pub fn eval(&self, rho: f64) -> Result<Doublet> {
        check_rho(rho)?;
        let (e, p) = (self.energy, &self.params);
        in_frame(p, |q| match self.shape {
            Shape::First { alpha1, scale } => Ok(f1_at(q, e, alpha1, rho)?.scaled(scale)),
            Shape::Second { alpha2, scale } => Ok(f2_at(q, e, alpha2, rho)?.scaled(scale)),
            Shape::Decaying { scale } => Ok(f3_at(q, e, alpha1(q, e), rho)?.scaled(scale)),
        })
    }

    /// Like [`eval`](Self::eval) but NaN on failure, for quadrature.
    pub fn eval_or_nan(&self, rho: f64) -> Doublet {
        self.eval(rho).unwrap_or(Doublet::new(f64::NAN, f64::NAN))
    }
}

fn region_check(p: &DiracParams, want: Region) -> Result<()> {
    let found = p.region();
    if found == want {
        Ok(())
    } else {
        Err(Error::RegionMismatch { expected: want, found })
    }
}

/// ln[Γ(β+n)/(n!Γ²(β))] for β > 0.
fn ln_weight_core(beta: f64, n: u64) -> Result<f64> {
    let nf = n as f64;
    Ok(ln_gamma(beta + nf)? - ln_gamma(nf + 1.0)? - 2.0 * ln_gamma(beta)?)
}

/// Levels σM_{|𝔫|} of F₁-type with Q² = (γ/2)^{β₁}Γ(β₁+|𝔫|)(1+sM/E)/(|𝔫|!Γ²(β₁)).
/// Shared by the first region and the λ = π/2 member of the third.
fn first_type_levels(q: &DiracParams, k_max: u64) -> Result<Vec<(i64, i8, f64, f64, f64)>> {
    let b1 = q.beta1();
    let sm = q.sm();
    let mut out = Vec::new();
    for k in 0..=k_max {
        for sigma in [1i8, -1] {
            // E = −sM is not an eigenvalue: the index set skips it.
            if k == 0 && sigma as f64 != q.s as f64 {
                continue;
            }
            let e = sigma as f64 * q.mass_level(k as f64);
            let ln_q2 = b1 * (0.5 * q.gamma).ln() + ln_weight_core(b1, k)? + (1.0 + sm / e).ln();
            let n = sigma as i64 * k as i64;
            out.push((n, sigma, e, (0.5 * ln_q2).exp(), -(k as f64)));
        }
    }
    Ok(out)
}

/// σM_{k+β₂} levels of F₂-type with
/// Q² = (γ/2)^{β₂}Γ(k+l+β₂)… written with |𝔫| = k + l.
fn second_type_levels(q: &DiracParams, k_max: u64) -> Result<Vec<(i64, i8, f64, f64, f64)>> {
    let b2 = q.beta2();
    let l = q.l.max(0) as u64;
    let sm = q.sm();
    let mut out = Vec::new();
    for k in 0..=k_max {
        let n_abs = k + l;
        for sigma in [1i8, -1] {
            let e = sigma as f64 * q.mass_level(k as f64 + b2);
            let ln_q2 = b2 * (0.5 * q.gamma).ln() + ln_gamma(n_abs as f64 + q.mu)?
                - ln_gamma(k as f64 + 1.0)?
                - 2.0 * ln_gamma(b2)?
                + (1.0 - sm / e).ln();
            out.push((sigma as i64 * n_abs as i64, sigma, e, (0.5 * ln_q2).exp(), -(k as f64)));
        }
    }
    Ok(out)
}

fn sort_levels(mut v: Vec<DiracLevel>) -> Vec<DiracLevel> {
    v.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    v
}

/// First region (l + μ ≤ 0): E = σM_{|𝔫|} for |𝔫| = 0..=k_max, E = −sM
/// excluded. Sorted by energy.
pub fn spectrum_r1(p: &DiracParams, k_max: u64) -> Result<Vec<DiracLevel>> {
    region_check(p, Region::R1)?;
    let q = p.positive_frame();
    let levels = first_type_levels(&q, k_max)?
        .into_iter()
        .map(|(n, sigma, energy, weight, alpha1)| DiracLevel {
            n,
            sigma,
            energy,
            weight,
            region: Region::R1,
            lambda: None,
            params: *p,
            shape: Shape::First { alpha1, scale: weight },
        })
        .collect();
    Ok(sort_levels(levels))
}

/// Second region (l ≥ 1): E = σM_{|𝔫|+μ} for |𝔫| = l..=l+k_max. Sorted by
/// energy.
pub fn spectrum_r2(p: &DiracParams, k_max: u64) -> Result<Vec<DiracLevel>> {
    region_check(p, Region::R2)?;
    let q = p.positive_frame();
    let levels = second_type_levels(&q, k_max)?
        .into_iter()
        .map(|(n, sigma, energy, weight, alpha2)| DiracLevel {
            n,
            sigma,
            energy,
            weight,
            region: Region::R2,
            lambda: None,
            params: *p,
            shape: Shape::Second { alpha2, scale: weight },
        })
        .collect();
    Ok(sort_levels(levels))
}

fn check_r3(p: &DiracParams) -> Result<()> {
    region_check(p, Region::R3)?;
    if p.mu == 0.5 {
        return Err(Error::InvalidParameter(
            "mu = 1/2 makes both third-region boundary powers coincide; no boundary condition is defined".into(),
        ));
    }
    Ok(())
}

/// (ω_(λ), ω̃_(λ)) = (ω₂cos λ + m_e^{−2κ₀}ω₁sin λ, ω₂sin λ − m_e^{−2κ₀}ω₁cos λ).
pub fn omega_lambda_pair(p: &DiracParams, lambda: Angle, energy: f64) -> Result<(f64, f64)> {
    let (w1, w2) = omegas(p, energy)?;
    let c = p.m_e.powf(-2.0 * p.kappa0());
    let (s, co) = (lambda.sin(), lambda.cos());
    Ok((w2 * co + c * w1 * s, w2 * s - c * w1 * co))
}

/// Ω(W) = ω_(λ)/ω̃_(λ); the third-region levels are its zeros. Reports
/// [`Error::OutOfRange`] exactly at a zero of ω̃_(λ).
pub fn omega_capital(p: &DiracParams, lambda: Angle, energy: f64) -> Result<f64> {
    check_r3(p)?;
    let (om, tilde) = omega_lambda_pair(p, lambda, energy)?;
    if tilde == 0.0 {
        return Err(Error::OutOfRange(format!("Omega has a pole at W = {energy}")));
    }
    Ok(om / tilde)
}

/// F_(λ) = m_e^{−κ₀}F₁ sin λ + m_e^{κ₀}F₂ cos λ, the solution obeying the
/// third-region boundary condition at the origin.
pub fn solution_lambda(p: &DiracParams, lambda: Angle, energy: f64, rho: f64) -> Result<Doublet> {
    let k0 = p.kappa0();
    let mut out = Doublet::default();
    if !lambda.is_zero() {
        out = out + solution_f1(p, energy, rho)?.scaled(p.m_e.powf(-k0) * lambda.sin());
    }
    if !lambda.is_half_pi() {
        out = out + solution_f2(p, energy, rho)?.scaled(p.m_e.powf(k0) * lambda.cos());
    }
    Ok(out)
}

fn omega_capital_deriv(p: &DiracParams, lambda: Angle, e: f64, h: f64) -> Result<f64> {
    let o = |x: f64| omega_capital(p, lambda, x);
    Ok((o(e - 2.0 * h)? - 8.0 * o(e - h)? + 8.0 * o(e + h)? - o(e + 2.0 * h)?) / (12.0 * h))
}

fn r3_index(energies: &[f64], e: f64) -> i64 {
    if e > 0.0 {
        energies.iter().filter(|&&x| x > 0.0 && x < e).count() as i64
    } else {
        -(energies.iter().filter(|&&x| x < 0.0 && x > e).count() as i64) - 1
    }
}

/// Third region (l = 0, μ > 0) with boundary condition λ: levels with
/// index k in `k_range` (k ≥ 0 the positive levels ascending, k < 0 the
/// negative ones descending from k = −1). The eigen-doublet is Q_k·F_(λ)
/// with Q_k = |Ω′(E_k)|^{−1/2}.
pub fn spectrum_r3(p: &DiracParams, lambda: Angle, k_range: RangeInclusive<i64>) -> Result<Vec<DiracLevel>> {
    check_r3(p)?;
    let q = p.positive_frame();
    let (k_lo, k_hi) = (*k_range.start(), *k_range.end());
    if k_lo > k_hi {
        return Ok(Vec::new());
    }
    let k0 = q.kappa0();
    let depth = (k_lo.unsigned_abs().max(k_hi.unsigned_abs()) + 3) as u64;
    let level = |n: i64, energy: f64, weight: f64, shape: Shape| DiracLevel {
        n,
        sigma: if energy > 0.0 { 1 } else { -1 },
        energy,
        weight,
        region: Region::R3,
        lambda: Some(lambda),
        params: *p,
        shape,
    };

    let mut found: Vec<DiracLevel> = Vec::new();
    if lambda.is_zero() || lambda.is_half_pi() {
        let raw = if lambda.is_zero() {
            second_type_levels(&q, depth)?
        } else {
            first_type_levels(&q, depth)?
        };
        let energies: Vec<f64> = raw.iter().map(|r| r.2).collect();
        for (_, _, e, w, alpha) in raw {
            let n = r3_index(&energies, e);
            let (rel, shape) = if lambda.is_zero() {
                (q.m_e.powf(-k0) * w, Shape::Second { alpha2: alpha, scale: w })
            } else {
                (q.m_e.powf(k0) * w, Shape::First { alpha1: alpha, scale: w })
            };
            found.push(level(n, e, rel, shape));
        }
    } else {
        // ω₂ vanishes at ±M_{j+μ}, ω₁ at ±M_{j+1} and at sM; ω_(λ) changes
        // sign only across these nodes' alternation.
        let c = q.m_e.powf(-2.0 * k0);
        let (s, co) = (lambda.sin(), lambda.cos());
        let mut nodes: Vec<(f64, f64)> = Vec::new();
        for j in 0..=depth {
            for sigma in [1.0, -1.0] {
                let eb = sigma * q.mass_level(j as f64 + q.mu);
                nodes.push((eb, c * s * omegas(&q, eb)?.0));
                let ea = sigma * q.mass_level(j as f64 + 1.0);
                nodes.push((ea, co * omegas(&q, ea)?.1));
            }
        }
        let sm = q.sm();
        nodes.push((sm, co * omegas(&q, sm)?.1));
        nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let f = |e: f64| omega_lambda_pair(&q, lambda, e).map(|v| v.0).unwrap_or(f64::NAN);
        let mut roots = Vec::new();
        for pair in nodes.windows(2) {
            let ((a, fa), (b, fb)) = (pair[0], pair[1]);
            if fa.signum() != fb.signum() {
                let e = brent(f, a, b, fa, fb, 0.0, 1e-13)?;
                roots.push((e, b - a));
            }
        }
        let energies: Vec<f64> = roots.iter().map(|r| r.0).collect();
        for &(e, width) in &roots {
            let n = r3_index(&energies, e);
            if n < k_lo || n > k_hi {
                continue;
            }
            let d = omega_capital_deriv(&q, lambda, e, 1e-4 * width)?;
            let weight = d.abs().powf(-0.5);
            let (w1, w2) = omegas(&q, e)?;
            // F_(λ) = c·F₃ at a root.
            let cf = if s.abs() > co.abs() { q.m_e.powf(-k0) * s / w2 } else { -q.m_e.powf(k0) * co / w1 };
            found.push(level(n, e, weight, Shape::Decaying { scale: weight * cf }));
        }
    }
    let mut out: Vec<DiracLevel> = found.into_iter().filter(|l| k_range.contains(&l.n)).collect();
    let expected = (k_hi - k_lo + 1) as usize;
    if out.len() != expected {
        return Err(Error::NoConvergence { lo: k_lo as f64, hi: k_hi as f64 });
    }
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(out)
}

/// Misfit of `doublet` against the third-region boundary condition
/// F ≈ c((m_eρ)^{κ₀}cos λ, (m_eρ)^{−κ₀}sin λ) on ρ ∈ [1e-4, 1e-2].
pub fn boundary_condition_check_r3<F: Fn(f64) -> Doublet>(doublet: F, lambda: Angle, p: &DiracParams) -> Result<f64> {
    check_r3(p)?;
    let q = p.positive_frame();
    let unflip = |r: f64| {
        let d = doublet(r);
        if p.eps == 1 {
            d
        } else {
            // inverse of (f, g) ↦ (g, −f)
            Doublet::new(-d.g, d.f)
        }
    };
    bc_fit_doublet(unflip, q.m_e, q.kappa0(), (lambda.cos(), lambda.sin()), (1e-4, 1e-2))
}

/// The ε-partner: (f, g) ↦ (g, −f) together with s → −s and ε → −ε.
pub fn epsilon_flip<F: Fn(f64) -> Doublet>(doublet: F, p: &DiracParams) -> (impl Fn(f64) -> Doublet, DiracParams) {
    (move |r: f64| doublet(r).flipped(), DiracParams { s: -p.s, eps: -p.eps, ..*p })
}

/// Levels of any region: `k_max` radial levels per sign in the first two,
/// indices −k_max−1..=k_max in the third.
pub fn spectrum(p: &DiracParams, lambda: Option<Angle>, k_max: u64) -> Result<Vec<DiracLevel>> {
    match p.region() {
        Region::R1 => spectrum_r1(p, k_max),
        Region::R2 => spectrum_r2(p, k_max),
        Region::R3 => {
            let lam = lambda.ok_or(Error::MissingExtension { l: p.l })?;
            let k = k_max as i64;
            spectrum_r3(p, lam, -k - 1..=k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{gram_matrix_doublets, identity_deviation, system_residual, QuadratureConfig};

    fn params(s: i8, l: i64, mu: f64, eps: i8) -> DiracParams {
        DiracParams::new(1.0, 0.4, s, l, mu, 0.8, eps).unwrap()
    }

    #[test]
    fn wronskians() {
        for &(s, l, mu, e) in &[(1, 2, 0.3, 1.7), (-1, 0, 0.6, -2.3), (1, -3, 0.45, 0.3), (-1, 1, 0.2, 3.1)] {
            let p = params(s, l, mu, 1);
            let (w1, w2) = omegas(&p, e).unwrap();
            for rho in [0.1, 1.0, 3.0] {
                let (a, b, c) = (
                    solution_f1(&p, e, rho).unwrap(),
                    solution_f2(&p, e, rho).unwrap(),
                    solution_f3(&p, e, rho).unwrap(),
                );
                assert!((wronskian(a, b) + 1.0).abs() < 1e-9, "{}", wronskian(a, b));
                assert!((wronskian(a, c) - w1).abs() < 1e-8 * w1.abs().max(1.0));
                assert!((wronskian(b, c) - w2).abs() < 1e-8 * w2.abs().max(1.0));
                let comb = a.scaled(w2) - b.scaled(w1);
                assert!((comb - c).norm_sqr().sqrt() < 1e-8 * c.norm_sqr().sqrt().max(1e-3));
            }
        }
    }

    #[test]
    fn first_region_levels() {
        let p = DiracParams::new(1.0, 0.0, 1, -1, 0.0, 1.0, 1).unwrap();
        let lv = spectrum_r1(&p, 3).unwrap();
        assert!(lv.iter().any(|l| (l.energy - 1.0).abs() < 1e-15));
        assert!(!lv.iter().any(|l| (l.energy + 1.0).abs() < 1e-9));
        assert!(lv.iter().any(|l| (l.energy.abs() - 5f64.sqrt()).abs() < 1e-14));
    }

    #[test]
    fn second_region_levels() {
        let p = DiracParams::new(1.0, 0.0, 1, 1, 0.5, 1.0, 1).unwrap();
        let lv = spectrum_r2(&p, 2).unwrap();
        let top: Vec<_> = lv.iter().filter(|l| l.n.abs() == 1).collect();
        assert_eq!(top.len(), 2);
        assert!(top.iter().all(|l| (l.energy.abs() - 2.0).abs() < 1e-14));
    }

    fn check_orthonormal(levels: &[DiracLevel]) {
        let basis: Vec<_> = levels.iter().map(|l| move |r: f64| l.eval_or_nan(r)).collect();
        let g = gram_matrix_doublets(&basis, &QuadratureConfig::default()).unwrap();
        assert!(identity_deviation(&g) < 1e-7, "{g:?}");
    }

    fn check_residuals(levels: &[DiracLevel]) {
        let grid = crate::verify::geometric_grid(0.05, 8.0, 60);
        for l in levels {
            let r = system_residual(&l.params, l.energy, |x| l.eval_or_nan(x), &grid);
            assert!(r < 1e-6, "residual {r} for {l:?}");
        }
    }

    #[test]
    fn eigen_doublets_first_and_second_region() {
        for eps in [1, -1] {
            for s in [1, -1] {
                let r1 = spectrum_r1(&params(s, -1, 0.3, eps), 3).unwrap();
                check_orthonormal(&r1);
                check_residuals(&r1);
                let r2 = spectrum_r2(&params(s, 2, 0.3, eps), 3).unwrap();
                check_orthonormal(&r2);
                check_residuals(&r2);
            }
        }
    }

    #[test]
    fn third_region_generic_angle() {
        for eps in [1, -1] {
            for s in [1, -1] {
                for &(mu, lam) in &[(0.25, 0.3), (0.7, -1.0)] {
                    let p = params(s, 0, mu, eps);
                    let lam = Angle::new(lam).unwrap();
                    let lv = spectrum_r3(&p, lam, -3..=3).unwrap();
                    for l in &lv {
                        assert!(omega_capital(&p, lam, l.energy).unwrap().abs() < 1e-9);
                        let bc = boundary_condition_check_r3(|r| l.eval_or_nan(r), lam, &p).unwrap();
                        assert!(bc < 1e-6, "bc {bc}");
                    }
                    check_orthonormal(&lv);
                    check_residuals(&lv);
                }
            }
        }
    }

    /// Generic third-region angles put a level inside (−m_e, m_e); it is a
    /// genuine normalizable eigen-doublet satisfying the boundary condition.
    #[test]
    fn third_region_admits_gap_levels() {
        let p = DiracParams::new(1.0, 0.0, 1, 0, 0.3, 0.8, 1).unwrap();
        for (lam, want) in [(-1.1, -0.0539), (-1.5, 0.9283)] {
            let lam = Angle::new(lam).unwrap();
            let lv = spectrum_r3(&p, lam, -2..=1).unwrap();
            let gap: Vec<_> = lv.iter().filter(|l| l.energy.abs() < p.m_e).collect();
            assert_eq!(gap.len(), 1);
            assert!((gap[0].energy - want).abs() < 1e-4, "{}", gap[0].energy);
            let bc = boundary_condition_check_r3(|r| gap[0].eval_or_nan(r), lam, &p).unwrap();
            assert!(bc < 1e-6, "bc {bc}");
            check_orthonormal(&lv);
            check_residuals(&lv);
        }
    }

    #[test]
    fn third_region_special_angles_match_limits() {
        let p = params(1, 0, 0.3, 1);
        for lam0 in [Angle::ZERO, Angle::HALF_PI] {
            let exact = spectrum_r3(&p, lam0, -3..=3).unwrap();
            check_orthonormal(&exact);
            let near = Angle::new(lam0.radians() - 1e-8).unwrap();
            let approx = spectrum_r3(&p, near, -3..=3).unwrap();
            for (a, b) in exact.iter().zip(&approx) {
                assert!((a.energy - b.energy).abs() < 1e-6, "{} {}", a.energy, b.energy);
                assert!((a.weight - b.weight).abs() < 1e-4 * a.weight, "{} {}", a.weight, b.weight);
            }
        }
    }

    #[test]
    fn omega_derivative_richardson() {
        let p = params(-1, 0, 0.35, 1);
        let lam = Angle::new(0.6).unwrap();
        for l in spectrum_r3(&p, lam, -2..=2).unwrap() {
            let d = |h: f64| omega_capital_deriv(&p, lam, l.energy, h).unwrap();
            let (h, d1) = (1e-3, d(1e-3));
            let rich = (16.0 * d(h / 2.0) - d1) / 15.0;
            assert!((l.weight.powi(-2) - rich.abs()).abs() < 1e-6 * rich.abs());
        }
    }

    #[test]
    fn epsilon_partner_spectra() {
        for s in [1, -1] {
            let a = spectrum_r3(&params(s, 0, 0.3, -1), Angle::new(0.4).unwrap(), -2..=2).unwrap();
            let b = spectrum_r3(&params(-s, 0, 0.3, 1), Angle::new(0.4).unwrap(), -2..=2).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.energy, y.energy);
            }
        }
    }

    #[test]
    fn half_flux_rejected() {
        assert!(spectrum_r3(&params(1, 0, 0.5, 1), Angle::ZERO, 0..=1).is_err());
    }
}
