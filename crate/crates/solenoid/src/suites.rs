//! Named verification suites, each reducing one family of invariants to a
//! single [`VerificationReport`]. Used by the `verify` command and by the
//! acceptance tests.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ab_radial::{self, FluxConfig};
use crate::angle::Angle;
use crate::assembly::{self, DiracFamily, ExtensionChoice};
use crate::dirac_radial::{self, wronskian, DiracLevel, DiracParams};
use crate::error::{Error, Result};
use crate::ms_radial::{self, MsLevel};
use crate::verify::{
    bc_fit, gram_matrix, gram_matrix_doublets, identity_deviation, ode_residual, quad_semi_infinite, system_residual,
    BcShape, QuadratureConfig, SchrodingerOperator, VerificationReport,
};
use crate::Region;

pub const SUITES: [&str; 10] = [
    "landau",
    "lambda-limit",
    "orthonormality",
    "residuals",
    "wronskian",
    "dirac-gap",
    "ab-bound",
    "boundary",
    "parseval",
    "epsilon-flip",
];

/// Runs one suite by name, or all of them for `"all"`.
pub fn run(name: &str, seed: u64, qcfg: &QuadratureConfig) -> Result<Vec<VerificationReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, seed, qcfg)).collect();
    }
    Ok(vec![run_one(name, seed, qcfg)?])
}

fn run_one(name: &str, seed: u64, qcfg: &QuadratureConfig) -> Result<VerificationReport> {
    match name {
        "landau" => landau(),
        "lambda-limit" => lambda_limit(),
        "orthonormality" => orthonormality(qcfg),
        "residuals" => residuals(),
        "wronskian" => wronskian_suite(seed),
        "dirac-gap" => dirac_gap(),
        "ab-bound" => ab_bound(),
        "boundary" => boundary(),
        "parseval" => parseval(qcfg),
        "epsilon-flip" => epsilon_flip(),
        other => Err(Error::InvalidParameter(format!(
            "unknown suite '{other}'; expected one of {} or all",
            SUITES.join(", ")
        ))),
    }
}

fn angle(x: f64) -> Angle {
    Angle::new(x).expect("finite angle")
}

/// 2D levels at μ = 0, λ = ±π/2 against γ(1+2n)/M_s, n ≤ 20.
pub fn landau() -> Result<VerificationReport> {
    let mut details = Vec::new();
    for &(gam, m_s) in &[(1.0, 1.0), (1.3, 0.7), (0.25, 2.0)] {
        let cfg = FluxConfig::from_mantissa(0.0, gam)?;
        for lam in [Angle::HALF_PI, angle(-FRAC_PI_2)] {
            let choice = ExtensionChoice::constant(Some(lam), None);
            for v in assembly::spectrum_2d(&cfg, &choice, m_s, -20..=20, 20)? {
                let want = gam * (1.0 + 2.0 * v.n as f64) / m_s;
                details.push((format!("gamma={gam} Ms={m_s} n={} l={}", v.n, v.l), (v.energy - want) / want));
            }
        }
    }
    Ok(VerificationReport::new("landau", 1e-12, details))
}

/// (μ, γ) grid used by the λ-limit check.
pub const LIMIT_GRID: [(f64, f64); 5] = [(0.0, 1.0), (0.0, 2.5), (0.2, 0.7), (0.5, 1.0), (0.85, 1.8)];

/// Root-found levels 10⁻⁶ away from the endpoint against the closed
/// forms. The side is the one on which no level escapes to −∞: π/2 − δ in
/// the second region, −π/2 + δ in the third.
pub fn lambda_limit() -> Result<VerificationReport> {
    let mut details = Vec::new();
    for &(mu, gam) in &LIMIT_GRID {
        let cfg = FluxConfig::from_mantissa(mu, gam)?;
        for l in cfg.extension_channels() {
            let near = if mu == 0.0 { angle(-FRAC_PI_2 + 1e-6) } else { angle(FRAC_PI_2 - 1e-6) };
            let got = ms_radial::discrete_spectrum(l, &cfg, Some(near), 9)?;
            let exact = ms_radial::discrete_spectrum(l, &cfg, Some(Angle::HALF_PI), 9)?;
            for (a, b) in got.iter().zip(&exact) {
                let rel = (a.energy - b.energy) / b.energy.abs();
                details.push((format!("mu={mu} gamma={gam} l={l} m={}", a.m), rel));
            }
        }
    }
    Ok(VerificationReport::new("lambda-limit", 1e-5, details))
}

fn ms_config(l: i64, mu: f64, lam: Option<f64>) -> Result<Vec<MsLevel>> {
    ms_radial::discrete_spectrum(l, &FluxConfig::from_mantissa(mu, 1.0)?, lam.map(angle), 7)
}

fn dirac_config(region: Region) -> Result<Vec<DiracLevel>> {
    match region {
        Region::R1 => {
            let p = DiracParams::new(1.0, 0.4, 1, -2, 0.3, 0.8, 1)?;
            Ok(dirac_radial::spectrum_r1(&p, 3)?.into_iter().take(8).collect())
        }
        Region::R2 => {
            let p = DiracParams::new(1.0, 0.4, -1, 1, 0.3, 0.8, 1)?;
            Ok(dirac_radial::spectrum_r2(&p, 3)?)
        }
        Region::R3 => {
            let p = DiracParams::new(1.0, 0.4, 1, 0, 0.3, 0.8, 1)?;
            dirac_radial::spectrum_r3(&p, angle(0.5), -4..=3)
        }
    }
}

/// The six representative eigenbases: MS R1/R2/R3 then Dirac R1/R2/R3.
pub fn representative_ms() -> Result<Vec<(String, i64, f64, Vec<MsLevel>)>> {
    Ok(vec![
        ("ms-R1".into(), 2, 0.3, ms_config(2, 0.3, None)?),
        ("ms-R2".into(), -1, 0.3, ms_config(-1, 0.3, Some(-0.9))?),
        ("ms-R3".into(), 0, 0.0, ms_config(0, 0.0, Some(0.4))?),
    ])
}

pub fn representative_dirac() -> Result<Vec<(String, Vec<DiracLevel>)>> {
    Ok(vec![
        ("dirac-R1".into(), dirac_config(Region::R1)?),
        ("dirac-R2".into(), dirac_config(Region::R2)?),
        ("dirac-R3".into(), dirac_config(Region::R3)?),
    ])
}

/// 8×8 Gram matrices of the six representative eigenbases.
pub fn orthonormality(qcfg: &QuadratureConfig) -> Result<VerificationReport> {
    let mut details = Vec::new();
    for (name, _, _, levels) in representative_ms()? {
        let basis: Vec<_> = levels.iter().map(|v| move |r: f64| v.eval(r)).collect();
        details.push((name, identity_deviation(&gram_matrix(&basis, qcfg)?)));
    }
    for (name, levels) in representative_dirac()? {
        let basis: Vec<_> = levels.iter().map(|v| move |r: f64| v.eval_or_nan(r)).collect();
        details.push((name, identity_deviation(&gram_matrix_doublets(&basis, qcfg)?)));
    }
    Ok(VerificationReport::new("orthonormality", 1e-6, details))
}

/// Relative residuals on ρ ∈ [0.05, 15] for every eigenpair of the
/// representative bases, the ε = −1 partners and the AB bound states.
pub fn residuals() -> Result<VerificationReport> {
    let grid = crate::verify::geometric_grid(0.05, 15.0, 80);
    let mut details = Vec::new();
    for (name, l, mu, levels) in representative_ms()? {
        let op = SchrodingerOperator { l_plus_mu: l as f64 + mu, gamma: 1.0 };
        for v in &levels {
            details.push((format!("{name} m={}", v.m), ode_residual(&op, v.energy, |r| v.eval(r), &grid)));
        }
    }
    for (name, levels) in representative_dirac()? {
        for v in &levels {
            let r = system_residual(&v.params, v.energy, |r| v.eval_or_nan(r), &grid);
            details.push((format!("{name} n={}", v.n), r));
        }
    }
    for (l, mu, lam) in [(0, 0.0, 0.2), (0, 0.4, -0.5), (-1, 0.4, -1.0)] {
        let cfg = FluxConfig::from_mantissa(mu, 0.0)?;
        if let Some(b) = ab_radial::bound_state(l, &cfg, angle(lam))? {
            let op = SchrodingerOperator { l_plus_mu: l as f64 + mu, gamma: 0.0 };
            let g = crate::verify::geometric_grid(0.05, 15.0 / (-b.energy).sqrt().max(1.0), 80);
            details.push((format!("ab l={l} mu={mu}"), ode_residual(&op, b.energy, |r| b.eval(r), &g)));
        }
    }
    Ok(VerificationReport::new("residuals", 1e-6, details))
}

/// Wronskian identities at 50 random (s, l, μ, γ, p_z, W) draws with
/// |l| ≤ 2, γ ∈ [0.3, 1) and |w|/2γ ≤ 4, each at ρ ∈ {0.1, 1, 5}.
///
/// Deviations are absolute. The rounding floor of f g̃ − g f̃ is about
/// ε|F₁||F₂|, which at ρ = 5 reaches 1e-8 for some draws.
pub fn wronskian_draws(seed: u64) -> Result<Vec<WronskianDraw>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::new();
    for _ in 0..50 {
        let s = if rng.gen_bool(0.5) { 1 } else { -1 };
        let l = rng.gen_range(-2..=2);
        let mu = rng.gen_range(0.05..0.95);
        let gam = rng.gen_range(0.3..1.0);
        let p_z = rng.gen_range(-1.0..1.0);
        let params = DiracParams::new(1.0, p_z, s, l, mu, gam, 1)?;
        let w_max = (params.mass().powi(2) + 8.0 * gam).sqrt();
        let w = rng.gen_range(-w_max..w_max);
        let (o1, o2) = dirac_radial::omegas(&params, w)?;
        let mut draw = WronskianDraw { params, w, f1_f2: 0.0, with_f3: 0.0 };
        for rho in [0.1, 1.0, 5.0] {
            let (a, b, c) = (
                dirac_radial::solution_f1(&params, w, rho)?,
                dirac_radial::solution_f2(&params, w, rho)?,
                dirac_radial::solution_f3(&params, w, rho)?,
            );
            draw.f1_f2 = draw.f1_f2.max((wronskian(a, b) + 1.0).abs());
            draw.with_f3 = draw.with_f3.max((wronskian(a, c) - o1).abs() + (wronskian(b, c) - o2).abs());
        }
        draws.push(draw);
    }
    Ok(draws)
}

/// Worst deviations of one Wronskian draw over the three radii.
#[derive(Debug, Clone, Copy)]
pub struct WronskianDraw {
    pub params: DiracParams,
    pub w: f64,
    /// max |Wr(F₁,F₂) + 1|
    pub f1_f2: f64,
    /// max |Wr(F₁,F₃) − ω₁| + |Wr(F₂,F₃) − ω₂|
    pub with_f3: f64,
}

pub fn wronskian_suite(seed: u64) -> Result<VerificationReport> {
    let details = wronskian_draws(seed)?
        .iter()
        .enumerate()
        // |Wr(F₁,F₂)+1| is scaled by 10 so that both bounds share 1e-8.
        .map(|(i, d)| (format!("draw {i}"), (10.0 * d.f1_f2).max(d.with_f3)))
        .collect();
    Ok(VerificationReport::new("wronskian", 1e-8, details))
}

/// 200+ Dirac levels over all regions (third region at λ ∈ {0, π/2}):
/// min|E| − m_e and the absence of E = −sM where it is excluded.
pub fn dirac_gap() -> Result<VerificationReport> {
    let mut details = Vec::new();
    let mut count = 0;
    for &mu in &[0.0, 0.3] {
        for lam in [Angle::ZERO, Angle::HALF_PI] {
            let fam = DiracFamily { m_e: 1.0, mu, gamma: 0.9, eps: 1 };
            let all = assembly::dirac_full_spectrum(&fam, &ExtensionChoice::constant(Some(lam), None), &[0.0], -3..=3, 4)?;
            count += all.len();
            let min = all.iter().map(|b| b.level.energy.abs()).fold(f64::INFINITY, f64::min);
            details.push((format!("mu={mu} lambda={lam} min|E|-m_e"), min - 1.0));
            let excluded = all
                .iter()
                .filter(|b| b.level.region == Region::R1 || (b.level.region == Region::R3 && lam.is_half_pi()))
                .filter(|b| (b.level.energy + b.s as f64 * b.level.params.mass()).abs() < 1e-10)
                .count();
            details.push((format!("mu={mu} lambda={lam} levels at -sM"), excluded as f64));
        }
    }
    details.push(("fewer than 200 levels".into(), if count >= 200 { 0.0 } else { 1.0 }));
    Ok(VerificationReport::new("dirac-gap", 1e-10, details))
}

/// Oracle values of the AB negative levels.
pub const AB_R3_LEVEL: f64 = -1.2609470067487736;
pub const AB_R2_LEVEL: f64 = -1.0;

pub fn ab_bound() -> Result<VerificationReport> {
    let r3 = ab_radial::bound_state(0, &FluxConfig::from_mantissa(0.0, 0.0)?, Angle::ZERO)?;
    let r2 = ab_radial::bound_state(0, &FluxConfig::from_mantissa(0.5, 0.0)?, angle(-FRAC_PI_4))?;
    let dev = |b: Option<ab_radial::BoundState>, want: f64| b.map_or(f64::INFINITY, |b| b.energy - want);
    Ok(VerificationReport::new(
        "ab-bound",
        1e-10,
        vec![("R3 lambda=0".into(), dev(r3, AB_R3_LEVEL)), ("R2 mu=1/2 lambda=-pi/4".into(), dev(r2, AB_R2_LEVEL))],
    ))
}

/// Boundary fits of eigenfunctions of every λ-family against the
/// expected small-ρ shapes.
pub fn boundary() -> Result<VerificationReport> {
    let window = (1e-4, 1e-2);
    let mut details = Vec::new();
    for &lam in &[-1.2, -0.3, 0.7] {
        let a = angle(lam);
        // AB, second region: c[(κ₀ρ)^{1/2+κ} cos λ + (κ₀ρ)^{1/2−κ} sin λ]
        let cfg = FluxConfig::from_mantissa(0.35, 0.0)?.with_kappa0(1.5)?;
        for l in [0, -1] {
            let kappa = (l as f64 + 0.35).abs();
            let shape = BcShape::Power { scale: 1.5, kappa };
            for e in [0.5, 3.0] {
                let u = |r: f64| ab_radial::continuous_eigenfunction(l, &cfg, Some(a), e, r).unwrap_or(f64::NAN);
                details.push((format!("ab R2 l={l} lambda={lam} E={e}"), bc_fit(u, shape, (a.cos(), a.sin()), window)?));
            }
            if let Some(b) = ab_radial::bound_state(l, &cfg, a)? {
                let r = bc_fit(|r| b.eval(r), shape, (a.cos(), a.sin()), window)?;
                details.push((format!("ab R2 bound l={l} lambda={lam}"), r));
            }
        }
        // AB, third region: c[ρ^{1/2} ln(κ₀ρ) cos λ + ρ^{1/2} sin λ]
        let cfg = FluxConfig::from_mantissa(0.0, 0.0)?.with_kappa0(0.8)?;
        let shape = BcShape::Log { scale: 0.8 };
        for e in [0.5, 3.0] {
            let u = |r: f64| ab_radial::continuous_eigenfunction(0, &cfg, Some(a), e, r).unwrap_or(f64::NAN);
            details.push((format!("ab R3 lambda={lam} E={e}"), bc_fit(u, shape, (a.cos(), a.sin()), window)?));
        }
        if let Some(b) = ab_radial::bound_state(0, &cfg, a)? {
            details.push((format!("ab R3 bound lambda={lam}"), bc_fit(|r| b.eval(r), shape, (a.cos(), a.sin()), window)?));
        }
        // MS, second region: c[(√(γ/2)ρ)^{1/2+κ} sin λ + (√(γ/2)ρ)^{1/2−κ} cos λ]
        let gam = 1.4;
        let cfg = FluxConfig::from_mantissa(0.35, gam)?;
        for l in [0, -1] {
            let kappa = (l as f64 + 0.35).abs();
            let shape = BcShape::Power { scale: (0.5 * gam).sqrt(), kappa };
            for v in ms_radial::discrete_spectrum(l, &cfg, Some(a), 3)? {
                let r = bc_fit(|r| v.eval(r), shape, (a.sin(), a.cos()), window)?;
                details.push((format!("ms R2 l={l} lambda={lam} m={}", v.m), r));
            }
        }
        // MS, third region: c[ρ^{1/2} ln(√(γ/2)ρ) cos λ + ρ^{1/2} sin λ]
        let cfg = FluxConfig::from_mantissa(0.0, gam)?;
        let shape = BcShape::Log { scale: (0.5 * gam).sqrt() };
        for v in ms_radial::discrete_spectrum(0, &cfg, Some(a), 3)? {
            let r = bc_fit(|r| v.eval(r), shape, (a.cos(), a.sin()), window)?;
            details.push((format!("ms R3 lambda={lam} m={}", v.m), r));
        }
        // Dirac, third region
        for s in [1, -1] {
            let p = DiracParams::new(1.2, 0.3, s, 0, 0.3, 0.8, 1)?;
            for v in dirac_radial::spectrum_r3(&p, a, -2..=1)? {
                let r = dirac_radial::boundary_condition_check_r3(|r| v.eval_or_nan(r), a, &p)?;
                details.push((format!("dirac R3 s={s} lambda={lam} k={}", v.n), r));
            }
        }
    }
    Ok(VerificationReport::new("boundary", 1e-5, details))
}

/// Gaussian profile centred at ρ = 3 with width 1/2 in the MS sector
/// (l = 0, μ = 0.3, γ = 1, λ = 0.4).
pub fn parseval_profile(rho: f64) -> f64 {
    (-2.0 * (rho - 3.0).powi(2)).exp()
}

pub const PARSEVAL_SIZES: [usize; 4] = [8, 16, 32, 64];

/// Parseval defects of [`parseval_profile`] at n_max ∈ {8, 16, 32, 64}.
pub fn parseval_gaps(qcfg: &QuadratureConfig) -> Result<Vec<f64>> {
    let cfg = FluxConfig::from_mantissa(0.3, 1.0)?;
    let levels = ms_radial::discrete_spectrum(0, &cfg, Some(angle(0.4)), 64)?;
    let norm = quad_semi_infinite(|r| parseval_profile(r).powi(2), qcfg)?.value;
    let basis: Vec<_> = levels.iter().map(|v| move |r: f64| v.eval(r)).collect();
    let coeffs = assembly::expand(parseval_profile, &basis, qcfg)?;
    Ok(PARSEVAL_SIZES.iter().map(|&n| assembly::parseval_gap(norm, &coeffs[..=n], &[])).collect())
}

pub fn parseval(qcfg: &QuadratureConfig) -> Result<VerificationReport> {
    let gaps = parseval_gaps(qcfg)?;
    let mut details: Vec<(String, f64)> = PARSEVAL_SIZES
        .iter()
        .zip(&gaps)
        .map(|(n, g)| (format!("gap n_max={n}"), if *n == 64 { *g } else { 0.0 }))
        .collect();
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    details.push(("non-monotone".into(), if monotone { 0.0 } else { 1.0 }));
    Ok(VerificationReport::new("parseval", 0.02, details))
}

/// ε = −1 spectra against ε = +1 with s → −s, and residuals of the
/// ε = −1 eigen-doublets.
pub fn epsilon_flip() -> Result<VerificationReport> {
    let grid = crate::verify::geometric_grid(0.05, 15.0, 60);
    let mut details = Vec::new();
    for s in [1i8, -1] {
        for (l, mu) in [(-2, 0.3), (2, 0.3), (0, 0.3), (0, 0.0)] {
            let a = DiracParams::new(1.0, 0.5, s, l, mu, 0.7, -1)?;
            let b = DiracParams::new(1.0, 0.5, -s, l, mu, 0.7, 1)?;
            let lam = Some(angle(0.9));
            let (la, lb) = (dirac_radial::spectrum(&a, lam, 4)?, dirac_radial::spectrum(&b, lam, 4)?);
            let spec_dev = if la.len() != lb.len() {
                f64::INFINITY
            } else {
                la.iter().zip(&lb).map(|(x, y)| (x.energy - y.energy).abs()).fold(0.0, f64::max)
            };
            details.push((format!("spectrum s={s} l={l} mu={mu}"), spec_dev));
            let res = la
                .iter()
                .map(|v| system_residual(&a, v.energy, |r| v.eval_or_nan(r), &grid))
                .fold(0.0, f64::max);
            // Residual threshold 1e-6 expressed against the shared 1e-12.
            details.push((format!("residual s={s} l={l} mu={mu}"), (res - 1e-6).max(0.0)));
        }
    }
    Ok(VerificationReport::new("epsilon-flip", 1e-12, details))
}
