use proptest::prelude::*;

use solenoid::ab_radial::{self, FluxConfig};
use solenoid::assembly::{index_map, index_unmap};
use solenoid::dirac_radial::{self, wronskian, DiracParams};
use solenoid::ms_radial;
use solenoid::specfun::{bessel_j, digamma, gamma, kummer_m, kummer_m_dmu_at0};
use solenoid::verify::{
    bc_fit, geometric_grid, gram_matrix, ode_residual, quad_semi_infinite, BcShape, QuadratureConfig,
    SchrodingerOperator,
};
use solenoid::{Angle, Region};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn angle(x: f64) -> Angle {
    Angle::new(x).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn gamma_recurrence(x in 0.1f64..40.0) {
        prop_assert!(rel(gamma(x + 1.0).unwrap(), x * gamma(x).unwrap()) < 1e-12);
    }

    #[test]
    fn digamma_recurrence(x in 0.1f64..40.0) {
        let lhs = digamma(x + 1.0).unwrap();
        let rhs = digamma(x).unwrap() + 1.0 / x;
        prop_assert!((lhs - rhs).abs() < 1e-11 * rhs.abs().max(1.0), "{} vs {}", lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn kummer_contiguous_relation(a in -6.0f64..6.0, b in 0.3f64..6.0, z in 0.0f64..25.0) {
        let terms = [
            (b - a) * kummer_m(a - 1.0, b, z).unwrap(),
            (2.0 * a - b + z) * kummer_m(a, b, z).unwrap(),
            -a * kummer_m(a + 1.0, b, z).unwrap(),
        ];
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        prop_assert!(terms.iter().sum::<f64>().abs() <= 1e-9 * scale, "{:?}", terms);
    }

    #[test]
    fn bessel_recurrence(nu in 1.0f64..12.0, x in 0.1f64..40.0) {
        let terms = [
            bessel_j(nu - 1.0, x).unwrap(),
            bessel_j(nu + 1.0, x).unwrap(),
            -2.0 * nu / x * bessel_j(nu, x).unwrap(),
        ];
        let scale = terms.iter().map(|t| t.abs()).fold(0.0, f64::max);
        prop_assert!(terms.iter().sum::<f64>().abs() <= 1e-9 * scale, "{:?}", terms);
    }
}

/// ∂/∂μ M(a₀ + μ, 1 + 2μ; z) at μ = 0 from 40-digit numerical
/// differentiation.
const DMU_GRID: [(f64, f64, f64); 20] = [
    (-3.4, 0.1, 7.0590934528282236e-1),
    (-3.4, 1.0, 1.7802254921366041),
    (-3.4, 5.0, 6.3621076237585974),
    (-3.4, 15.0, -3.4810051347710586e+3),
    (-1.5, 0.1, 3.8932945010067084e-1),
    (-1.5, 1.0, 2.8878411034226879),
    (-1.5, 5.0, -1.7145353653244468e+1),
    (-1.5, 15.0, -1.2921724886174752e+4),
    (0.25, 0.1, 5.1437623968240985e-2),
    (0.25, 1.0, 6.7788013156348038e-1),
    (0.25, 5.0, 1.9271759861368764e+1),
    (0.25, 15.0, 4.4994784475077389e+4),
    (1.0, 0.1, -1.078144298437942e-1),
    (1.0, 1.0, -2.1653822153269364),
    (1.0, 5.0, -3.2469858745161636e+2),
    (1.0, 15.0, -1.0739591251876148e+7),
    (2.6, 0.1, -4.7816701917974073e-1),
    (2.6, 1.0, -1.4776240323106108e+1),
    (2.6, 5.0, -7.3349191810194218e+3),
    (2.6, 15.0, -9.4225759256489125e+8),
];

#[test]
fn kummer_dmu_grid() {
    for (a0, z, want) in DMU_GRID {
        let got = kummer_m_dmu_at0(a0, z).unwrap();
        assert!(rel(got, want) < 1e-7, "({a0}, {z}): {got} vs {want}");
    }
}

/// Channel of the requested region in the pure AB field.
fn ab_channel(region: u8, mu: f64) -> (i64, f64) {
    match region {
        0 => (2, mu),
        1 => (0, mu.max(0.05)),
        _ => (0, 0.0),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn ab_continuum_solves_the_radial_equation(
        region in 0u8..3, mu in 0.0f64..0.95, e in 0.05f64..20.0, lam in -1.5f64..1.5,
    ) {
        let (l, mu) = ab_channel(region, mu);
        let cfg = FluxConfig::from_mantissa(mu, 0.0).unwrap();
        let lambda = Some(angle(lam));
        let u = |r: f64| ab_radial::continuous_eigenfunction(l, &cfg, lambda, e, r).unwrap();
        let op = SchrodingerOperator { l_plus_mu: l as f64 + mu, gamma: 0.0 };
        let res = ode_residual(&op, e, u, &geometric_grid(0.05, 20.0, 60));
        prop_assert!(res < 1e-6, "residual {}", res);
    }

    #[test]
    fn ab_q_is_positive(kappa in 0.01f64..0.99, lam in -1.5f64..1.5, e in 1e-6f64..1e3, k0 in 0.1f64..10.0) {
        if let Some(lt) = ab_radial::lambda_tilde(kappa, angle(lam)) {
            prop_assert!(ab_radial::q_a(kappa, lt, e, k0) > 0.0);
        }
    }

    #[test]
    fn ab_bound_states_are_normalized(region in 1u8..3, mu in 0.05f64..0.95, lam in -1.5f64..1.5) {
        let (l, mu) = ab_channel(region, mu);
        let cfg = FluxConfig::from_mantissa(mu, 0.0).unwrap();
        if let Some(b) = ab_radial::bound_state(l, &cfg, angle(lam)).unwrap() {
            let q = QuadratureConfig::default()
                .with_tail(solenoid::verify::TailDecay::Exponential)
                .with_split(1.0 / (-b.energy).sqrt());
            let norm = quad_semi_infinite(|r| b.eval(r).powi(2), &q).unwrap().value;
            prop_assert!((norm - 1.0).abs() < 1e-7, "norm {}", norm);
        }
    }
}

/// Counts levels of `lambda_levels` strictly inside each gap of the sorted
/// `reference` ladder, for the first `gaps` gaps.
fn interlacing_counts(reference: &[f64], lambda_levels: &[f64], gaps: usize) -> Vec<usize> {
    reference
        .windows(2)
        .take(gaps)
        .map(|w| lambda_levels.iter().filter(|&&e| e > w[0] && e < w[1]).count())
        .collect()
}

fn ms_energies(l: i64, cfg: &FluxConfig, lambda: Angle, m_max: u32) -> Vec<f64> {
    let mut e: Vec<f64> =
        ms_radial::discrete_spectrum(l, cfg, Some(lambda), m_max).unwrap().iter().map(|v| v.energy).collect();
    e.sort_by(f64::total_cmp);
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// One root per gap of the λ = π/2 ladder for the first 20 gaps.
    #[test]
    fn ms_roots_interlace(l in -1i64..=0, mu in 0.0f64..0.95, gam in 0.3f64..3.0, lam in -1.5f64..1.5) {
        let mu = if l == -1 { mu.max(0.05) } else { mu };
        let cfg = FluxConfig::from_mantissa(mu, gam).unwrap();
        let reference = ms_energies(l, &cfg, Angle::HALF_PI, 22);
        let levels = ms_energies(l, &cfg, angle(lam), 22);
        let counts = interlacing_counts(&reference, &levels, 20);
        prop_assert!(counts.iter().all(|&c| c == 1), "{:?}", counts);
    }

    /// Levels with a fixed label move by less than the ladder spacing 2γ
    /// between neighbouring steps of a 100-step sweep.
    #[test]
    fn ms_levels_are_continuous_in_lambda(l in -1i64..=0, mu in 0.0f64..0.95, gam in 0.3f64..3.0) {
        let mu = if l == -1 { mu.max(0.05) } else { mu };
        let cfg = FluxConfig::from_mantissa(mu, gam).unwrap();
        let sweep: Vec<Vec<(u32, f64)>> = (0..100)
            .map(|i| {
                let lam = angle(-1.3 + 2.6 * i as f64 / 99.0);
                ms_radial::discrete_spectrum(l, &cfg, Some(lam), 6).unwrap().iter().map(|v| (v.m, v.energy)).collect()
            })
            .collect();
        for w in sweep.windows(2) {
            for &(m, e) in &w[0] {
                if m == 0 {
                    continue;
                }
                if let Some(&(_, e2)) = w[1].iter().find(|p| p.0 == m) {
                    prop_assert!((e2 - e).abs() < 2.0 * gam, "m = {}: {} -> {}", m, e, e2);
                }
            }
        }
    }
}

fn dirac_params(s: i8, l: i64, mu: f64, gam: f64, p_z: f64, eps: i8) -> DiracParams {
    DiracParams::new(1.0, p_z, s, l, mu, gam, eps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Up to the rounding floor ε|F₁||F₂| of the 2×2 determinant.
    #[test]
    fn dirac_wronskian_is_constant(
        s in prop::sample::select(vec![1i8, -1]), l in -3i64..=3, mu in 0.05f64..0.95, gam in 0.3f64..2.0,
        p_z in -1.0f64..1.0, w in -4.0f64..4.0, rho in prop::sample::select(vec![0.01, 0.1, 1.0, 5.0]),
    ) {
        let p = dirac_params(s, l, mu, gam, p_z, 1);
        let (a, b) = (dirac_radial::solution_f1(&p, w, rho).unwrap(), dirac_radial::solution_f2(&p, w, rho).unwrap());
        let floor = 16.0 * f64::EPSILON * (a.norm_sqr() * b.norm_sqr()).sqrt();
        prop_assert!((wronskian(a, b) + 1.0).abs() < 1e-9 + floor, "{}", wronskian(a, b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// |E| ≥ m_e in the first and second regions and in the third at the
    /// angles 0 and π/2.
    #[test]
    fn dirac_gap_is_respected(
        s in prop::sample::select(vec![1i8, -1]), l in -3i64..=3, mu in 0.0f64..0.95, gam in 0.3f64..2.0,
        p_z in -1.0f64..1.0, half in any::<bool>(),
    ) {
        let p = dirac_params(s, l, mu, gam, p_z, 1);
        let lambda = (p.region() == Region::R3).then_some(if half { Angle::HALF_PI } else { Angle::ZERO });
        for v in dirac_radial::spectrum(&p, lambda, 6).unwrap() {
            prop_assert!(v.energy.abs() >= 1.0 - 1e-12, "E = {}", v.energy);
        }
    }

    #[test]
    fn dirac_third_region_interlaces(
        s in prop::sample::select(vec![1i8, -1]), mu in 0.05f64..0.95, gam in 0.3f64..2.0, lam in -1.5f64..1.5,
    ) {
        prop_assume!((mu - 0.5).abs() > 1e-3);
        let p = dirac_params(s, 0, mu, gam, 0.0, 1);
        let energies = |a: Angle| {
            let mut e: Vec<f64> =
                dirac_radial::spectrum_r3(&p, a, -12..=12).unwrap().iter().map(|v| v.energy).collect();
            e.sort_by(f64::total_cmp);
            e
        };
        let reference: Vec<f64> = energies(Angle::HALF_PI).into_iter().filter(|&e| e > 0.0).collect();
        let counts = interlacing_counts(&reference, &energies(angle(lam)), 10);
        prop_assert!(counts.iter().all(|&c| c == 1), "{:?}", counts);
    }

    #[test]
    fn dirac_epsilon_partner_spectra(
        s in prop::sample::select(vec![1i8, -1]), l in -2i64..=2, mu in 0.05f64..0.95, gam in 0.3f64..2.0,
        p_z in -1.0f64..1.0, lam in -1.5f64..1.5,
    ) {
        prop_assume!((mu - 0.5).abs() > 1e-3);
        let minus = dirac_params(s, l, mu, gam, p_z, -1);
        let plus = dirac_params(-s, l, mu, gam, p_z, 1);
        let lambda = (minus.region() == Region::R3).then(|| angle(lam));
        let a = dirac_radial::spectrum(&minus, lambda, 4).unwrap();
        let b = dirac_radial::spectrum(&plus, lambda, 4).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x.energy - y.energy).abs() <= 1e-12 * x.energy.abs().max(1.0), "{} vs {}", x.energy, y.energy);
        }
    }
}

#[test]
fn index_maps_are_inverse() {
    for l in -50i64..=50 {
        for m in 0..=50u64 {
            assert_eq!(index_unmap(index_map(l, m), l).unwrap(), m);
        }
        for n in 0..=50u64 {
            if let Ok(m) = index_unmap(n, l) {
                assert_eq!(index_map(l, m), n);
            }
        }
    }
}

#[test]
fn quadrature_is_exact_on_gaussian_moments() {
    let cfg = QuadratureConfig::default();
    for k in 0..=40 {
        let got = quad_semi_infinite(|r: f64| r.powi(k) * (-r * r).exp(), &cfg).unwrap().value;
        let want = 0.5 * gamma(0.5 * (k as f64 + 1.0)).unwrap();
        assert!(rel(got, want) < 1e-9, "k = {k}: {got} vs {want}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn gram_is_symmetric_and_permutation_invariant(seed in 0usize..120) {
        let basis: Vec<Box<dyn Fn(f64) -> f64>> =
            (0..5).map(|j| Box::new(move |r: f64| r.powi(j) * (-r * r).exp()) as Box<dyn Fn(f64) -> f64>).collect();
        let perm: Vec<usize> = {
            let mut p: Vec<usize> = (0..5).collect();
            let mut k = seed;
            for i in (1..5).rev() {
                p.swap(i, k % (i + 1));
                k /= i + 1;
            }
            p
        };
        let cfg = QuadratureConfig::default();
        let g = gram_matrix(&basis, &cfg).unwrap();
        let permuted: Vec<&Box<dyn Fn(f64) -> f64>> = perm.iter().map(|&i| &basis[i]).collect();
        let gp = gram_matrix(&permuted, &cfg).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                prop_assert!((g[i][j] - g[j][i]).abs() <= 1e-14 * g[i][j].abs().max(1.0));
                prop_assert!((gp[i][j] - g[perm[i]][perm[j]]).abs() <= 1e-14 * g[i][j].abs().max(1.0));
            }
        }
    }

    #[test]
    fn bc_fit_is_scale_invariant(
        kappa in 0.1f64..0.9, p in -2.0f64..2.0, q in -2.0f64..2.0, c in prop::sample::select(vec![1e-6, 0.3, 7.0, 1e5]),
    ) {
        let u = |r: f64| p * r.powf(0.5 + kappa) + q * r.powf(0.5 - kappa) + 0.1 * r.powf(2.5 - kappa);
        let shape = BcShape::Power { scale: 1.0, kappa };
        let window = (1e-4, 1e-2);
        let base = bc_fit(u, shape, (1.0, 0.5), window).unwrap();
        let scaled = bc_fit(|r| c * u(r), shape, (1.0, 0.5), window).unwrap();
        prop_assert!((base - scaled).abs() < 1e-10, "{} vs {}", base, scaled);
    }
}
