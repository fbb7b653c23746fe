//! Numerical checks: half-line quadrature, Gram matrices, residuals of the
//! radial equations and asymptotic fits of boundary behaviour at ρ → 0.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::dirac_radial::{DiracParams, Doublet};
use crate::error::{Error, Result};
use crate::quad::{gauss_kronrod, pairwise_sum, tanh_sinh, QuadRule};

/// How the integrand decays at infinity; selects the tail substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailDecay {
    /// e^{−cρ²}: substitution u = e^{−(ρ²−R²)}.
    Gaussian,
    /// e^{−cρ}: substitution t = e^{−(ρ−R)}.
    Exponential,
    /// ρ^{−p}, p > 1: substitution t = R/ρ.
    Algebraic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// End of the near-origin panel handled by the tanh–sinh rule.
    pub split_point: f64,
    pub tail: TailDecay,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { rel_tol: 1e-9, abs_tol: 1e-12, split_point: 1.0, tail: TailDecay::Gaussian }
    }
}

impl QuadratureConfig {
    pub fn with_tail(self, tail: TailDecay) -> Self {
        QuadratureConfig { tail, ..self }
    }

    pub fn with_split(self, split_point: f64) -> Self {
        QuadratureConfig { split_point, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.split_point > 0.0) {
            return Err(Error::InvalidParameter(
                "quadrature tolerances and split point must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Value of an integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Outcome of a named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub max_abs_deviation: f64,
    pub threshold: f64,
    pub pass: bool,
    /// Free-form rows (label, value) describing the individual samples.
    pub details: Vec<(String, f64)>,
}

impl VerificationReport {
    pub fn new(check_name: impl Into<String>, threshold: f64, details: Vec<(String, f64)>) -> Self {
        let max_abs_deviation = details.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
        let max_abs_deviation = if details.iter().any(|(_, v)| v.is_nan()) { f64::NAN } else { max_abs_deviation };
        VerificationReport {
            check_name: check_name.into(),
            max_abs_deviation,
            threshold,
            pass: max_abs_deviation <= threshold,
            details,
        }
    }
}

const PANELS_PER_SEGMENT: usize = 8;
const MAX_SEGMENTS: usize = 60;

/// ∫₀^∞ f(ρ) dρ.
pub fn quad_semi_infinite<F: Fn(f64) -> f64>(f: F, cfg: &QuadratureConfig) -> Result<Integral> {
    quad_semi_infinite_with_rule(f, cfg).map(|(i, _)| i)
}

/// ∫₀^∞ f(ρ) dρ, also returning the adapted nodes and weights so that
/// related integrands can be integrated with the same rule.
///
/// [0, split] uses tanh–sinh (ρ^{1/2±κ} endpoint behaviour); beyond that,
/// segments of doubling width are split into fixed panels and refined by
/// Gauss–Kronrod until they stop contributing; the remaining tail is mapped
/// to a finite interval according to `cfg.tail`.
pub fn quad_semi_infinite_with_rule<F: Fn(f64) -> f64>(
    f: F,
    cfg: &QuadratureConfig,
) -> Result<(Integral, QuadRule)> {
    cfg.validate()?;
    let split = cfg.split_point;
    let (head, mut rule) = tanh_sinh(&f, 0.0, split, 0.1 * cfg.rel_tol, 0.1 * cfg.abs_tol);
    let acceptable = |value: f64, err: f64, reference: f64| {
        value.is_finite() && err <= cfg.abs_tol.max(cfg.rel_tol * value.abs().max(reference.abs()))
    };
    if !(head.converged || acceptable(head.value, head.error, 0.0)) || !head.value.is_finite() {
        return Err(Error::Quadrature { value: head.value, error: head.error });
    }
    let mut parts = vec![head.value];
    let mut error = head.error;
    let total = |parts: &[f64]| pairwise_sum(parts);

    let panel_abs = 0.01 * cfg.abs_tol;
    let panel_rel = 0.01 * cfg.rel_tol;
    let mut a = split;
    let mut width = split;
    let mut quiet = 0;
    let algebraic_limit = 64.0 * split;
    for _ in 0..MAX_SEGMENTS {
        if cfg.tail == TailDecay::Algebraic && a >= algebraic_limit {
            break;
        }
        let step = width / PANELS_PER_SEGMENT as f64;
        let mut segment = Vec::with_capacity(PANELS_PER_SEGMENT);
        for j in 0..PANELS_PER_SEGMENT {
            let lo = a + j as f64 * step;
            let hi = if j + 1 == PANELS_PER_SEGMENT { a + width } else { lo + step };
            let (r, panel_rule) = gauss_kronrod(&f, lo, hi, panel_abs, panel_rel, 400);
            if !(r.converged || acceptable(r.value, r.error, total(&parts))) || !r.value.is_finite() {
                return Err(Error::Quadrature { value: r.value, error: r.error });
            }
            segment.push(r.value);
            error += r.error;
            rule.extend(panel_rule);
        }
        let piece = pairwise_sum(&segment);
        parts.push(piece);
        let scale = cfg.abs_tol.max(cfg.rel_tol * total(&parts).abs());
        a += width;
        width *= 2.0;
        if piece.abs() <= 0.01 * scale {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }

    let r0 = a;
    let (tail, tail_rule) = match cfg.tail {
        // ρ = R/t, dρ = R/t² dt
        TailDecay::Algebraic => {
            let g = |t: f64| r0 / (t * t) * f(r0 / t);
            let (res, rule) = gauss_kronrod(g, 0.0, 1.0, panel_abs, panel_rel, 400);
            let mapped = map_rule(rule, |t| (r0 / t, r0 / (t * t)));
            (res, mapped)
        }
        // ρ = R − ln t, dρ = dt/t
        TailDecay::Exponential => {
            let g = |t: f64| f(r0 - t.ln()) / t;
            let (res, rule) = gauss_kronrod(g, 0.0, 1.0, panel_abs, panel_rel, 400);
            (res, map_rule(rule, |t| (r0 - t.ln(), 1.0 / t)))
        }
        // ρ = √(R² − ln u), dρ = du/(2uρ)
        TailDecay::Gaussian => {
            let rho = |u: f64| (r0 * r0 - u.ln()).sqrt();
            let g = |u: f64| {
                let r = rho(u);
                f(r) / (2.0 * u * r)
            };
            let (res, rule) = gauss_kronrod(g, 0.0, 1.0, panel_abs, panel_rel, 400);
            (res, map_rule(rule, |u| (rho(u), 1.0 / (2.0 * u * rho(u)))))
        }
    };
    if !(tail.converged || acceptable(tail.value, tail.error, total(&parts))) || !tail.value.is_finite() {
        return Err(Error::Quadrature { value: tail.value, error: tail.error });
    }
    parts.push(tail.value);
    error += tail.error;
    rule.extend(tail_rule);
    Ok((Integral { value: total(&parts), error }, rule))
}

fn map_rule(rule: QuadRule, map: impl Fn(f64) -> (f64, f64)) -> QuadRule {
    let mut out = QuadRule::default();
    for (t, w) in rule.nodes.iter().zip(&rule.weights) {
        let (x, jac) = map(*t);
        out.nodes.push(x);
        out.weights.push(w * jac);
    }
    out
}

/// ⟨u_i, u_j⟩ = ∫₀^∞ u_i u_j dρ for real scalar functions.
pub fn gram_matrix<F: Fn(f64) -> f64>(basis: &[F], cfg: &QuadratureConfig) -> Result<Vec<Vec<f64>>> {
    gram_with(basis.len(), |i, r| (basis[i](r), 0.0), cfg)
}

/// ⟨F_i, F_j⟩ = ∫₀^∞ (f_i f_j + g_i g_j) dρ for doublets.
pub fn gram_matrix_doublets<F: Fn(f64) -> Doublet>(basis: &[F], cfg: &QuadratureConfig) -> Result<Vec<Vec<f64>>> {
    gram_with(
        basis.len(),
        |i, r| {
            let d = basis[i](r);
            (d.f, d.g)
        },
        cfg,
    )
}

fn gram_with(n: usize, eval: impl Fn(usize, f64) -> (f64, f64), cfg: &QuadratureConfig) -> Result<Vec<Vec<f64>>> {
    // The rule is adapted to Σ|F_i|², summed in sorted order so that it does
    // not depend on the order of the basis.
    let density = |r: f64| {
        let mut terms: Vec<f64> = (0..n)
            .map(|i| {
                let (f, g) = eval(i, r);
                f * f + g * g
            })
            .collect();
        terms.sort_by(f64::total_cmp);
        terms.iter().sum::<f64>()
    };
    let (_, rule) = quad_semi_infinite_with_rule(density, cfg)?;
    let values: Vec<Vec<(f64, f64)>> = (0..n).map(|i| rule.nodes.iter().map(|&r| eval(i, r)).collect()).collect();
    let mut gram = vec![vec![0.0; n]; n];
    let mut products = vec![0.0; rule.len()];
    for i in 0..n {
        for j in i..n {
            for (k, w) in rule.weights.iter().enumerate() {
                let (fi, gi) = values[i][k];
                let (fj, gj) = values[j][k];
                products[k] = w * (fi * fj + gi * gj);
            }
            let v = pairwise_sum(&products);
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    Ok(gram)
}

/// Largest |G_ij − δ_ij|.
pub fn identity_deviation(gram: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - target).abs());
        }
    }
    worst
}

/// `n` points spaced geometrically on [a, b].
pub fn geometric_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    let ratio = (b / a).ln() / (n - 1) as f64;
    (0..n).map(|i| a * (ratio * i as f64).exp()).collect()
}

/// The radial Schrödinger operation −d²/dρ² + [(l+μ+γρ²/2)² − 1/4]ρ⁻²;
/// γ = 0 gives the pure AB operation with α = (l+μ)² − 1/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchrodingerOperator {
    pub l_plus_mu: f64,
    pub gamma: f64,
}

impl SchrodingerOperator {
    pub fn potential(&self, rho: f64) -> f64 {
        let a = self.l_plus_mu + 0.5 * self.gamma * rho * rho;
        (a * a - 0.25) / (rho * rho)
    }
}

const D2: [f64; 7] = [1.0 / 90.0, -3.0 / 20.0, 1.5, -49.0 / 18.0, 1.5, -3.0 / 20.0, 1.0 / 90.0];
const D1: [f64; 7] = [-1.0 / 60.0, 3.0 / 20.0, -0.75, 0.0, 0.75, -3.0 / 20.0, 1.0 / 60.0];

fn stencil(u: &impl Fn(f64) -> f64, rho: f64, h: f64, coef: &[f64; 7]) -> f64 {
    coef.iter().enumerate().map(|(j, c)| c * u(rho + (j as f64 - 3.0) * h)).sum()
}

/// max |−U″ + V U − E U| over the grid, relative to the largest of the
/// three terms anywhere on the grid. Derivatives use sixth-order central
/// differences with a step resolving the local wavelength.
pub fn ode_residual<F: Fn(f64) -> f64>(op: &SchrodingerOperator, energy: f64, u: F, grid: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &rho in grid {
        let v = op.potential(rho);
        let k = (energy.abs() + v.abs()).sqrt().max(1e-300);
        let h = 0.05 * rho.min(1.0 / k);
        let d2 = stencil(&u, rho, h, &D2) / (h * h);
        let val = u(rho);
        let res = -d2 + (v - energy) * val;
        worst = worst.max(res.abs());
        scale = scale.max(d2.abs()).max((v * val).abs()).max((energy * val).abs());
    }
    if scale == 0.0 {
        return f64::NAN;
    }
    worst / scale
}

/// Residual of the first-order radial Dirac system
/// f′ − ε(γρ/2 + κ_l/ρ)f + (W − sM)g = 0,
/// g′ + ε(γρ/2 + κ_l/ρ)g − (W + sM)f = 0,
/// relative to the largest term magnitude on the grid.
pub fn system_residual<F: Fn(f64) -> Doublet>(p: &DiracParams, energy: f64, doublet: F, grid: &[f64]) -> f64 {
    let eps = p.eps as f64;
    let sm = p.s as f64 * p.mass();
    let kappa = p.kappa_l();
    let (fc, gc) = (|r: f64| doublet(r).f, |r: f64| doublet(r).g);
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &rho in grid {
        let a = eps * (0.5 * p.gamma * rho + kappa / rho);
        let k = energy.abs() + sm.abs() + a.abs();
        let h = 0.05 * rho.min(1.0 / k);
        let df = stencil(&fc, rho, h, &D1) / h;
        let dg = stencil(&gc, rho, h, &D1) / h;
        let d = doublet(rho);
        let terms_f = [df, a * d.f, (energy - sm) * d.g];
        let terms_g = [dg, a * d.g, (energy + sm) * d.f];
        let rf = terms_f[0] - terms_f[1] + terms_f[2];
        let rg = terms_g[0] + terms_g[1] - terms_g[2];
        worst = worst.max(rf.abs()).max(rg.abs());
        for t in terms_f.iter().chain(&terms_g) {
            scale = scale.max(t.abs());
        }
    }
    if scale == 0.0 {
        return f64::NAN;
    }
    worst / scale
}

/// Leading small-ρ shapes of a scalar boundary condition
/// c[A(ρ)·p + B(ρ)·q].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcShape {
    /// A = (kρ)^{1/2+κ}, B = (kρ)^{1/2−κ}.
    Power { scale: f64, kappa: f64 },
    /// A = ρ^{1/2} ln(kρ), B = ρ^{1/2}.
    Log { scale: f64 },
}

const FIT_POINTS: usize = 200;

/// Fits `u` on a geometric grid over `window` by the two leading shapes
/// plus their first corrections, and returns how far the fitted pair
/// (c_A, c_B) is from being parallel to `expected` = (p, q):
/// |c_A q − c_B p| / (|c|·|(p, q)|). Invariant under rescaling of `u`.
pub fn bc_fit<F: Fn(f64) -> f64>(u: F, shape: BcShape, expected: (f64, f64), window: (f64, f64)) -> Result<f64> {
    let grid = geometric_grid(window.0, window.1, FIT_POINTS);
    let columns: Vec<Box<dyn Fn(f64) -> f64>> = match shape {
        BcShape::Power { scale, kappa } => vec![
            Box::new(move |r: f64| (scale * r).powf(0.5 + kappa)),
            Box::new(move |r: f64| (scale * r).powf(0.5 - kappa)),
            Box::new(move |r: f64| r.powf(2.5 + kappa)),
            Box::new(move |r: f64| r.powf(2.5 - kappa)),
        ],
        BcShape::Log { scale } => vec![
            Box::new(move |r: f64| r.sqrt() * (scale * r).ln()),
            Box::new(|r: f64| r.sqrt()),
            Box::new(|r: f64| r.powf(2.5) * r.ln()),
            Box::new(|r: f64| r.powf(2.5)),
        ],
    };
    let values: Vec<f64> = grid.iter().map(|&r| u(r)).collect();
    let coef = least_squares(&grid, &columns, &values)?;
    Ok(parallel_mismatch((coef[0], coef[1]), expected))
}

/// Boundary fit for a doublet against
/// F ≈ c((mρ)^{κ₀}·p, (mρ)^{−κ₀}·q): the upper component is fitted by
/// (mρ)^{κ₀}, ρ^{1−κ₀}, ρ^{2+κ₀}, ρ^{3−κ₀}, the lower by (mρ)^{−κ₀},
/// ρ^{1+κ₀}, ρ^{2−κ₀}, ρ^{3+κ₀}.
pub fn bc_fit_doublet<F: Fn(f64) -> Doublet>(
    doublet: F,
    m_e: f64,
    kappa0: f64,
    expected: (f64, f64),
    window: (f64, f64),
) -> Result<f64> {
    let grid = geometric_grid(window.0, window.1, FIT_POINTS);
    let k = kappa0;
    let upper: Vec<Box<dyn Fn(f64) -> f64>> = vec![
        Box::new(move |r: f64| (m_e * r).powf(k)),
        Box::new(move |r: f64| r.powf(1.0 - k)),
        Box::new(move |r: f64| r.powf(2.0 + k)),
        Box::new(move |r: f64| r.powf(3.0 - k)),
    ];
    let lower: Vec<Box<dyn Fn(f64) -> f64>> = vec![
        Box::new(move |r: f64| (m_e * r).powf(-k)),
        Box::new(move |r: f64| r.powf(1.0 + k)),
        Box::new(move |r: f64| r.powf(2.0 - k)),
        Box::new(move |r: f64| r.powf(3.0 + k)),
    ];
    let samples: Vec<Doublet> = grid.iter().map(|&r| doublet(r)).collect();
    let f: Vec<f64> = samples.iter().map(|d| d.f).collect();
    let g: Vec<f64> = samples.iter().map(|d| d.g).collect();
    let cf = least_squares(&grid, &upper, &f)?[0];
    let cg = least_squares(&grid, &lower, &g)?[0];
    Ok(parallel_mismatch((cf, cg), expected))
}

fn parallel_mismatch(c: (f64, f64), w: (f64, f64)) -> f64 {
    (c.0 * w.1 - c.1 * w.0).abs() / (c.0.hypot(c.1) * w.0.hypot(w.1))
}

fn least_squares(grid: &[f64], columns: &[Box<dyn Fn(f64) -> f64>], values: &[f64]) -> Result<Vec<f64>> {
    let (n, m) = (grid.len(), columns.len());
    let mut a = DMatrix::<f64>::from_fn(n, m, |i, j| columns[j](grid[i]));
    // Row weights make every sample count relative to the local magnitude of
    // the leading shapes; column scaling equilibrates the basis.
    for i in 0..n {
        let w = 1.0 / a[(i, 0)].abs().max(a[(i, 1)].abs());
        for j in 0..m {
            a[(i, j)] *= w;
        }
    }
    let b = DVector::from_fn(n, |i, _| values[i] / columns[0](grid[i]).abs().max(columns[1](grid[i]).abs()));
    let norms: Vec<f64> = (0..m).map(|j| a.column(j).norm()).collect();
    for (j, s) in norms.iter().enumerate() {
        if !(*s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidParameter("degenerate boundary-fit basis".into()));
        }
        a.column_mut(j).unscale_mut(*s);
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite samples in boundary fit".into()));
    }
    let svd = a.svd(true, true);
    let x = svd
        .solve(&b, 1e-15)
        .map_err(|e| Error::InvalidParameter(format!("boundary fit failed: {e}")))?;
    Ok((0..m).map(|j| x[j] / norms[j]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn standard_integrals() {
        let cfg = QuadratureConfig::default();
        let g = quad_semi_infinite(|r: f64| (-r * r).exp(), &cfg).unwrap();
        assert!((g.value - PI.sqrt() / 2.0).abs() < 1e-12);
        let e = quad_semi_infinite(|r: f64| r * (-r).exp(), &cfg.with_tail(TailDecay::Exponential)).unwrap();
        assert!((e.value - 1.0).abs() < 1e-11);
        let a = quad_semi_infinite(|r: f64| 1.0 / (1.0 + r * r), &cfg.with_tail(TailDecay::Algebraic)).unwrap();
        assert!((a.value - PI / 2.0).abs() < 1e-9);
        // endpoint singularity r^{-1/2}
        let s = quad_semi_infinite(|r: f64| (-r).exp() / r.sqrt(), &cfg.with_tail(TailDecay::Exponential)).unwrap();
        assert!((s.value - PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn polynomial_times_gaussian() {
        // ∫ ρ^n e^{−ρ²} = Γ((n+1)/2)/2
        let cfg = QuadratureConfig::default();
        for n in [0, 5, 17, 40] {
            let v = quad_semi_infinite(|r: f64| r.powi(n) * (-r * r).exp(), &cfg).unwrap().value;
            let want = crate::specfun::gamma((n as f64 + 1.0) / 2.0).unwrap() / 2.0;
            assert!((v - want).abs() <= 1e-9 * want, "n = {n}: {v} vs {want}");
        }
    }

    #[test]
    fn gram_of_hermite_functions() {
        // orthonormal on ℝ₊: odd Hermite functions × √2
        let h = |n: usize| {
            move |x: f64| {
                let (mut p0, mut p1) = (1.0, 2.0 * x);
                for k in 1..n {
                    let p2 = 2.0 * x * p1 - 2.0 * k as f64 * p0;
                    p0 = p1;
                    p1 = p2;
                }
                let hn = if n == 0 { p0 } else { p1 };
                let norm = (2f64.powi(n as i32) * (1..=n).product::<usize>() as f64 * PI.sqrt()).sqrt();
                2f64.sqrt() * hn * (-x * x / 2.0).exp() / norm
            }
        };
        let basis = vec![h(1), h(3), h(5), h(7)];
        let g = gram_matrix(&basis, &QuadratureConfig::default()).unwrap();
        assert!(identity_deviation(&g) < 1e-10);
    }

    #[test]
    fn residual_detects_wrong_energy() {
        // −u″ + (ρ²/4·γ² ...) : free Bessel solution √ρ J_1(ρ) at E = 1, γ = 0
        let op = SchrodingerOperator { l_plus_mu: 1.0, gamma: 0.0 };
        let u = |r: f64| r.sqrt() * crate::specfun::bessel_j(1.0, r).unwrap();
        let grid = geometric_grid(0.05, 15.0, 80);
        assert!(ode_residual(&op, 1.0, u, &grid) < 1e-8);
        assert!(ode_residual(&op, 1.1, u, &grid) > 1e-2);
    }

    #[test]
    fn power_fit_is_scale_invariant() {
        let (k, p, q) = (0.3, 0.6, -0.8);
        let u = |r: f64| p * r.powf(0.5 + k) + q * r.powf(0.5 - k) + 0.7 * r.powf(2.5 + k);
        let shape = BcShape::Power { scale: 1.0, kappa: k };
        let r1 = bc_fit(u, shape, (p, q), (1e-4, 1e-2)).unwrap();
        let r2 = bc_fit(|r| -3.5 * u(r), shape, (p, q), (1e-4, 1e-2)).unwrap();
        assert!(r1 < 1e-10 && r2 < 1e-10);
        assert!(bc_fit(u, shape, (q, p), (1e-4, 1e-2)).unwrap() > 0.1);
    }
}
