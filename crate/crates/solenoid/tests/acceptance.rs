//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use solenoid::ab_radial::{self, FluxConfig};
use solenoid::assembly::{self, ExtensionChoice};
use solenoid::suites;
use solenoid::verify::QuadratureConfig;
use solenoid::Angle;

/// −4 e^{−2C} with C the Euler–Mascheroni constant (40-digit evaluation).
const AB_R3_ORACLE: f64 = -1.2609470067487735922;
/// Γ-ratio closed form at μ = 1/2, a = 0, λ = −π/4, k₀ = 1.
const AB_R2_ORACLE: f64 = -1.0;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

type Criterion = fn() -> Outcome;

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    Outcome::new(out.pass && in_time, format!("{}; {:.3} s (limit {} s)", out.detail, elapsed.as_secs_f64(), limit.as_secs()))
}

fn report(r: solenoid::Result<solenoid::verify::VerificationReport>, tol: f64) -> Outcome {
    match r {
        Ok(r) => {
            let worst = match r.details.iter().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())) {
                Some((label, v)) if *v != 0.0 => format!(", worst {label}"),
                _ => String::new(),
            };
            Outcome::new(
                r.max_abs_deviation < tol,
                format!("max deviation {:.3e}, bound {tol:e} ({} samples{worst})", r.max_abs_deviation, r.details.len()),
            )
        }
        Err(e) => Outcome::new(false, format!("error: {e}")),
    }
}

fn landau_ladder() -> Outcome {
    timed(Duration::from_secs(1), || {
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for &(gam, m_s) in &[(1.0, 1.0), (1.3, 0.7), (0.25, 2.0)] {
            let cfg = FluxConfig::from_mantissa(0.0, gam).unwrap();
            for lam in [Angle::HALF_PI, Angle::new(-FRAC_PI_2).unwrap()] {
                let choice = ExtensionChoice::constant(Some(lam), None);
                let levels = assembly::spectrum_2d(&cfg, &choice, m_s, -20..=20, 20).unwrap();
                for v in &levels {
                    let want = gam * (1.0 + 2.0 * v.n as f64) / m_s;
                    worst = worst.max((v.energy - want).abs() / want);
                    count += 1;
                }
                let ns: Vec<u64> = levels.iter().map(|v| v.n).collect();
                if (0..=20).any(|n| !ns.contains(&n)) {
                    return Outcome::new(false, format!("missing Landau level at gamma={gam}, lambda={lam}"));
                }
            }
        }
        Outcome::new(worst < 1e-12, format!("max relative deviation {worst:.3e}, bound 1e-12, over {count} levels"))
    })
}

fn lambda_limit() -> Outcome {
    timed(Duration::from_secs(10), || report(suites::lambda_limit(), 1e-5))
}

fn orthonormality() -> Outcome {
    timed(Duration::from_secs(30), || report(suites::orthonormality(&QuadratureConfig::default()), 1e-6))
}

fn residuals() -> Outcome {
    report(suites::residuals(), 1e-6)
}

fn wronskian() -> Outcome {
    let draws = match suites::wronskian_draws(1) {
        Ok(d) => d,
        Err(e) => return Outcome::new(false, format!("error: {e}")),
    };
    let e12 = draws.iter().map(|d| d.f1_f2).fold(0.0, f64::max);
    let e3 = draws.iter().map(|d| d.with_f3).fold(0.0, f64::max);
    let bad = draws.iter().filter(|d| d.f1_f2 >= 1e-9 || d.with_f3 >= 1e-8).count();
    Outcome::new(
        bad == 0,
        format!(
            "max |Wr(F1,F2)+1| {e12:.3e} (bound 1e-9), max |Wr(F1,F3)-w1|+|Wr(F2,F3)-w2| {e3:.3e} (bound 1e-8); {bad} of {} draws out of bounds",
            draws.len()
        ),
    )
}

fn dirac_gap() -> Outcome {
    report(suites::dirac_gap(), 1e-10)
}

fn ab_bound_states() -> Outcome {
    let level = |mu: f64, lam: f64| -> Option<f64> {
        let cfg = FluxConfig::from_mantissa(mu, 0.0).unwrap();
        ab_radial::bound_state(0, &cfg, Angle::new(lam).unwrap()).unwrap().map(|b| b.energy)
    };
    let r3 = level(0.0, 0.0);
    let r2 = level(0.5, -FRAC_PI_4);
    let dev = |got: Option<f64>, want: f64| got.map_or(f64::INFINITY, |e| (e - want).abs());
    let (d3, d2) = (dev(r3, AB_R3_ORACLE), dev(r2, AB_R2_ORACLE));
    Outcome::new(d3 < 1e-10 && d2 < 1e-10, format!("R3 {r3:?} (dev {d3:.3e}), R2 {r2:?} (dev {d2:.3e}), bound 1e-10"))
}

fn boundary() -> Outcome {
    report(suites::boundary(), 1e-5)
}

fn parseval() -> Outcome {
    let gaps = match suites::parseval_gaps(&QuadratureConfig::default()) {
        Ok(g) => g,
        Err(e) => return Outcome::new(false, format!("error: {e}")),
    };
    let last = gaps[gaps.len() - 1];
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    let list: Vec<String> = gaps.iter().map(|g| format!("{g:.2e}")).collect();
    Outcome::new(
        last < 0.02 && monotone,
        format!("gaps at n_max {:?}: [{}]; bound 0.02 at 64, strictly decreasing: {monotone}", suites::PARSEVAL_SIZES, list.join(", ")),
    )
}

fn epsilon_flip() -> Outcome {
    report(suites::epsilon_flip(), 1e-12)
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 5] = [
        &["spectrum", "--problem", "schrodinger-ms", "--mu", "0.3", "--lambda0", "0.4", "--lambda-1", "-0.2"],
        &["--format", "json", "spectrum", "--problem", "dirac", "--dims", "3d", "--mu", "0.2", "--pz", "0,0.5", "--lambda0", "pi/3"],
        &["eigenfunction", "--problem", "dirac", "--dims", "radial", "--mu", "0.4", "--channel", "0", "--index", "1", "--lambda0", "0.5"],
        &["verify", "--suite", "wronskian", "--seed", "7"],
        &["sweep", "--param", "lambda", "--from", "-1.4", "--to", "1.4", "--steps", "7", "--l", "-1..1", "--mu", "0.3", "--lambda-1", "0.2"],
    ];
    let exe = env!("CARGO_BIN_EXE_solenoid");
    let mut total = 0;
    for args in runs {
        let out: Vec<_> = (0..2).map(|_| Command::new(exe).args(args).output().expect("spawn solenoid")).collect();
        if out[0].stdout.is_empty() || out[0].stdout != out[1].stdout || out[0].status.code() != out[1].status.code() {
            return Outcome::new(false, format!("outputs differ for `solenoid {}`", args.join(" ")));
        }
        total += out[0].stdout.len();
    }
    Outcome::new(true, format!("{} invocations run twice, {total} bytes identical", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("Landau ladder", landau_ladder),
        ("lambda-limit consistency", lambda_limit),
        ("orthonormality", orthonormality),
        ("ODE/system residuals", residuals),
        ("Wronskian identities", wronskian),
        ("Dirac gap and exclusion", dirac_gap),
        ("AB bound states", ab_bound_states),
        ("boundary conditions", boundary),
        ("discrete completeness", parseval),
        ("epsilon flip", epsilon_flip),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let out = check();
        println!("criterion {:>2} {name:<26} {}  {}", i + 1, if out.pass { "PASS" } else { "FAIL" }, out.detail);
        failed += usize::from(!out.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
