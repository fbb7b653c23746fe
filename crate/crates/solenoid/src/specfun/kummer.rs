//! Confluent hypergeometric functions: Kummer's M(a, b; z) (written Φ in
//! much of the physics literature), Tricomi's U(a, b; z) (Ψ), and a few
//! derived quantities.

use std::f64::consts::PI;

use super::gamma::{
    cos_pi, digamma, gamma, gamma_reciprocal, is_nonpositive_integer, ln_gamma, pochhammer, sin_pi,
};
use super::{SpecFunError, SpecFunResult};
use crate::quad::exp_sinh;

const EPS: f64 = f64::EPSILON;
const MAX_TERMS: usize = 20_000;

/// Above this z, M is evaluated through its large-z expansion whenever
/// that expansion converges to working precision.
pub(crate) const Z_SWITCH: f64 = 30.0;

/// Below this z, U is evaluated from power series.
const Z_SERIES_U: f64 = 2.0;

/// Generalized Laguerre polynomial L_n^(α)(x) by its three-term recurrence.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// M(−n, b; z) = n!/(b)_n · L_n^(b−1)(z).
fn kummer_m_polynomial(n: u32, b: f64, z: f64) -> f64 {
    let ratio = (1..=n).fold(1.0, |acc, k| acc * k as f64 / (b + k as f64 - 1.0));
    ratio * laguerre(n, b - 1.0, z)
}

/// Power series for M with a compensated running sum.
pub fn kummer_m_series(a: f64, b: f64, z: f64) -> SpecFunResult {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut abs_sum = 1.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) / (b + kf) * z / (kf + 1.0);
        term *= ratio;
        // Kahan summation
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        abs_sum += term.abs();
        if term == 0.0 {
            break;
        }
        if ratio.abs() < 0.5 && term.abs() <= EPS * 0.1 * sum.abs() {
            break;
        }
    }
    SpecFunResult { value: sum, abs_error_estimate: 4.0 * EPS * abs_sum }
}

/// ln|1/Γ(x)| and the sign of 1/Γ(x); the sign is 0 at the poles of Γ.
fn ln_abs_rgamma(x: f64) -> (f64, f64) {
    if is_nonpositive_integer(x) {
        return (f64::NEG_INFINITY, 0.0);
    }
    if x > 0.0 {
        return (-ln_gamma(x).unwrap_or(f64::INFINITY), 1.0);
    }
    // 1/Γ(x) = sin(πx) Γ(1−x)/π
    let s = sin_pi(x);
    (
        ln_gamma(1.0 - x).unwrap_or(f64::INFINITY) + s.abs().ln() - PI.ln(),
        s.signum(),
    )
}

/// Sum of the divergent large-z series Σ (p)_s (q)_s / s! · w^s, truncated
/// at the smallest term. Returns None unless it reaches working precision.
fn asymptotic_sum(p: f64, q: f64, w: f64) -> Option<(f64, f64)> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    for s in 0..500 {
        let sf = s as f64;
        let next = term * (p + sf) * (q + sf) / (sf + 1.0) * w;
        if next == 0.0 {
            return Some((sum, EPS * abs_sum));
        }
        if next.abs() > term.abs() {
            return None;
        }
        term = next;
        sum += term;
        abs_sum += term.abs();
        if term.abs() <= EPS * 0.1 * sum.abs() {
            return Some((sum, 2.0 * EPS * abs_sum));
        }
    }
    None
}

/// Large-z expansion of M(a, b; z) for b > 0, combining the exponentially
/// growing and the algebraic parts of the connection with U.
pub fn kummer_m_asymptotic(a: f64, b: f64, z: f64) -> Option<SpecFunResult> {
    if !(b > 0.0) || !(z > 0.0) {
        return None;
    }
    let (s1, e1) = asymptotic_sum(b - a, 1.0 - a, 1.0 / z)?;
    let (s2, e2) = asymptotic_sum(a, a - b + 1.0, -1.0 / z)?;
    let lgb = ln_gamma(b).ok()?;
    let (lra, sra) = ln_abs_rgamma(a);
    let (lrba, srba) = ln_abs_rgamma(b - a);
    let lnz = z.ln();
    let t1 = if sra == 0.0 {
        0.0
    } else {
        sra * (lgb + z + (a - b) * lnz + lra).exp()
    };
    let t2 = if srba == 0.0 {
        0.0
    } else {
        srba * cos_pi(a) * (lgb - a * lnz + lrba).exp()
    };
    let value = t1 * s1 + t2 * s2;
    if !value.is_finite() {
        return None;
    }
    let err = (t1 * e1).abs() + (t2 * e2).abs() + 4.0 * EPS * (t1 * s1).abs().max((t2 * s2).abs());
    Some(SpecFunResult { value, abs_error_estimate: err })
}

/// Kummer's function M(a, b; z) with an error estimate.
pub fn kummer_m_with_error(a: f64, b: f64, z: f64) -> Result<SpecFunResult, SpecFunError> {
    if is_nonpositive_integer(b) {
        return Err(SpecFunError::ParameterPole { function: "kummer_m", b });
    }
    if !z.is_finite() || a.is_nan() || b.is_nan() {
        return Err(SpecFunError::Domain { function: "kummer_m", x: z });
    }
    if z == 0.0 || a == 0.0 {
        return Ok(SpecFunResult { value: 1.0, abs_error_estimate: 0.0 });
    }
    if is_nonpositive_integer(a) {
        let v = kummer_m_polynomial((-a) as u32, b, z);
        return Ok(SpecFunResult { value: v, abs_error_estimate: 8.0 * EPS * v.abs() * (1.0 - a) });
    }
    if z > Z_SWITCH && b > 0.0 {
        if let Some(r) = kummer_m_asymptotic(a, b, z) {
            if r.abs_error_estimate <= 1e-14 * r.value.abs() {
                return Ok(r);
            }
        }
    }
    Ok(kummer_m_series(a, b, z))
}

/// Kummer's function M(a, b; z). `b` must not be a nonpositive integer;
/// see [`kummer_m_over_gamma_beta`] for the regularized form.
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<f64, SpecFunError> {
    Ok(kummer_m_with_error(a, b, z)?.value)
}

/// M(a, b; z)/Γ(b), entire in b. At b = −n this is the limit
/// z^{n+1} (a)_{n+1}/(n+1)! · M(a+n+1, n+2; z).
pub fn kummer_m_over_gamma_beta(a: f64, b: f64, z: f64) -> f64 {
    if b > 0.0 {
        if let Ok(m) = kummer_m(a, b, z) {
            let r = gamma_reciprocal(b);
            if m.is_finite() {
                return m * r;
            }
        }
    }
    // Σ (a)_k z^k / k! · 1/Γ(b+k), with 1/Γ(b+k) advanced by recurrence
    // once b + k is positive.
    let mut p = 1.0; // (a)_k z^k / k!
    let mut rg = gamma_reciprocal(b);
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let term = p * rg;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        let ratio = (a + kf) * z / (kf + 1.0);
        p *= ratio;
        if b + kf > 0.0 {
            rg /= b + kf;
        } else {
            rg = gamma_reciprocal(b + kf + 1.0);
        }
        if p == 0.0 {
            break;
        }
        if b + kf > 0.0 && (ratio / (b + kf)).abs() < 0.5 && (p * rg).abs() <= EPS * 0.1 * sum.abs() {
            break;
        }
    }
    sum
}

/// Tricomi's function U(a, b; z), z > 0.
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<f64, SpecFunError> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(SpecFunError::Domain { function: "tricomi_u", x: z });
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) {
        // U(−n, b; z) = (−1)^n n! L_n^(b−1)(z)
        let n = (-a) as u32;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let fact = (1..=n).fold(1.0, |acc, k| acc * k as f64);
        return Ok(sign * fact * laguerre(n, b - 1.0, z));
    }
    let b_int = b == b.round();
    if b_int && b <= 0.0 {
        // Kummer transformation U(a, b; z) = z^{1−b} U(a−b+1, 2−b; z)
        return Ok(z.powf(1.0 - b) * tricomi_u(a - b + 1.0, 2.0 - b, z)?);
    }
    let near_int = (b - b.round()).abs() < 1e-4;
    if z <= Z_SERIES_U {
        if b_int {
            return tricomi_u_integer_b(a, b as u32 - 1, z);
        }
        if !near_int {
            return tricomi_u_connection(a, b, z);
        }
    }
    tricomi_u_integral_recurrence(a, b, z)
}

/// U via its connection with M for non-integer b.
fn tricomi_u_connection(a: f64, b: f64, z: f64) -> Result<f64, SpecFunError> {
    let c1 = gamma(1.0 - b)? * gamma_reciprocal(a - b + 1.0);
    let c2 = gamma(b - 1.0)? * gamma_reciprocal(a);
    let m1 = if c1 == 0.0 { 0.0 } else { kummer_m(a, b, z)? };
    let m2 = if c2 == 0.0 { 0.0 } else { kummer_m(a - b + 1.0, 2.0 - b, z)? };
    Ok(c1 * m1 + c2 * z.powf(1.0 - b) * m2)
}

/// U(a, n+1; z) from its logarithmic series.
fn tricomi_u_integer_b(a: f64, n: u32, z: f64) -> Result<f64, SpecFunError> {
    let nf = n as f64;
    let lnz = z.ln();
    let mut log_part = 0.0;
    let pre = gamma_reciprocal(a - nf);
    if pre != 0.0 {
        let mut coef = 1.0; // (a)_k / ((n+1)_k k!) z^k
        let mut psi_a = digamma(a)?;
        let mut psi_1 = digamma(1.0)?;
        let mut psi_n = digamma(nf + 1.0)?;
        for k in 0..MAX_TERMS {
            let kf = k as f64;
            let term = coef * (lnz + psi_a - psi_1 - psi_n);
            log_part += term;
            let ratio = (a + kf) / ((nf + 1.0 + kf) * (kf + 1.0)) * z;
            coef *= ratio;
            psi_a += 1.0 / (a + kf);
            psi_1 += 1.0 / (1.0 + kf);
            psi_n += 1.0 / (nf + 1.0 + kf);
            if coef == 0.0 {
                break;
            }
            if ratio.abs() < 0.5 && term.abs() <= EPS * 0.1 * log_part.abs() && k > 2 {
                break;
            }
        }
        let fact_n = (1..=n).fold(1.0, |acc, k| acc * k as f64);
        let sign = if (n + 1) % 2 == 0 { 1.0 } else { -1.0 };
        log_part *= sign * pre / fact_n;
    }
    let mut finite_part = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        let fact_km1 = (1..k).fold(1.0, |acc, j| acc * j as f64);
        let fact_nmk = (1..=(n - k)).fold(1.0, |acc, j| acc * j as f64);
        finite_part += fact_km1 * pochhammer(1.0 - a + kf, n - k) / fact_nmk * z.powf(-kf);
    }
    Ok(log_part + gamma_reciprocal(a) * finite_part)
}

/// U(a, b; z) for a ≥ 1 from
/// U = z^{−a}/Γ(a) ∫₀^∞ e^{−s} s^{a−1} (1 + s/z)^{b−a−1} ds.
fn tricomi_u_integral(a: f64, b: f64, z: f64) -> Result<f64, SpecFunError> {
    let c = b - a - 1.0;
    let r = exp_sinh(
        |s| {
            if s == 0.0 {
                return 0.0;
            }
            ((a - 1.0) * s.ln() - s + c * (s / z).ln_1p()).exp()
        },
        0.0,
        1e-14,
        0.0,
    );
    if !r.converged || !r.value.is_finite() {
        return Err(SpecFunError::NoConvergence { function: "tricomi_u" });
    }
    let (lra, _) = ln_abs_rgamma(a);
    Ok(r.value * (lra - a * z.ln()).exp())
}

/// U for general a: the integral at a₀ = a + N ∈ [1, 2) and a₀ + 1, then
/// the three-term recurrence in a toward smaller a, the direction in which
/// U is the dominant solution.
fn tricomi_u_integral_recurrence(a: f64, b: f64, z: f64) -> Result<f64, SpecFunError> {
    if a >= 1.0 {
        return tricomi_u_integral(a, b, z);
    }
    let steps = (1.0 - a).ceil() as u32;
    let a0 = a + steps as f64;
    let mut u_hi = tricomi_u_integral(a0 + 1.0, b, z)?;
    let mut u = tricomi_u_integral(a0, b, z)?;
    let mut ac = a0;
    for _ in 0..steps {
        // U(a−1) = (2a − b + z) U(a) − a(a − b + 1) U(a+1)
        let u_lo = (2.0 * ac - b + z) * u - ac * (ac - b + 1.0) * u_hi;
        u_hi = u;
        u = u_lo;
        ac -= 1.0;
    }
    Ok(u)
}

/// ∂/∂μ M(a₀ + μ, 1 + 2μ; z) at μ = 0, by the termwise differentiated
/// series.
pub fn kummer_m_dmu_at0(a0: f64, z: f64) -> Result<f64, SpecFunError> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(SpecFunError::Domain { function: "kummer_m_dmu_at0", x: z });
    }
    // p_k = (a₀)_k z^k/(k!)², d_k = [∂_μ (a₀+μ)_k] z^k/(k!)², h_k = Σ_{j<k} 1/(1+j)
    let mut p = 1.0;
    let mut d = 0.0;
    let mut h = 0.0;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let term = d - 2.0 * h * p;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        let scale = z / ((kf + 1.0) * (kf + 1.0));
        let d_next = (d * (a0 + kf) + p) * scale;
        let p_next = p * (a0 + kf) * scale;
        h += 1.0 / (kf + 1.0);
        d = d_next;
        p = p_next;
        if p == 0.0 && d == 0.0 {
            break;
        }
        let growth = ((a0 + kf).abs() + 1.0) * scale;
        if k > 2 && growth < 0.5 && (d.abs() + 2.0 * h * p.abs()) <= EPS * 0.1 * sum.abs() {
            break;
        }
    }
    Ok(sum)
}
