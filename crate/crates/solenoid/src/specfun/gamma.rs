//! Gamma function family: Γ, 1/Γ, ln Γ, ψ and ψ′.

use std::f64::consts::PI;

use super::SpecFunError;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_4e-6,
];

/// Taylor coefficients of 1/Γ(1+x) about x = 0.
const RGAMMA1P: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// True when `x` is one of 0, −1, −2, …
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x == x.round() {
        return 0.0;
    }
    // Reduce to r in [-1, 1] with sin(πx) = sin(πr).
    let r = x - 2.0 * (x / 2.0).round();
    if r.abs() <= 0.25 {
        (PI * r).sin()
    } else if r > 0.75 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.75 {
        -(PI * (1.0 + r)).sin()
    } else if r > 0.0 {
        (PI * (0.5 - r)).cos()
    } else {
        -(PI * (0.5 + r)).cos()
    }
}

/// cos(πx) with exact zeros at the half-integers.
pub fn cos_pi(x: f64) -> f64 {
    if (x - 0.5) == (x - 0.5).round() {
        return 0.0;
    }
    sin_pi(x + 0.5)
}

fn lanczos_sum(x: f64) -> f64 {
    // x here is the shifted argument (Γ(x+1) form).
    let mut a = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + k as f64);
    }
    a
}

fn factorial_exact(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Γ(x) for x not a nonpositive integer.
pub fn gamma(x: f64) -> Result<f64, SpecFunError> {
    if x.is_nan() {
        return Err(SpecFunError::Domain { function: "gamma", x });
    }
    if is_nonpositive_integer(x) {
        return Err(SpecFunError::Pole { function: "gamma", x });
    }
    if x == x.round() && (1.0..=171.0).contains(&x) {
        return Ok(factorial_exact(x as u32 - 1));
    }
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π / sin(πx)
        let g1 = gamma(1.0 - x)?;
        return Ok(PI / (sin_pi(x) * g1));
    }
    if x > 171.7 {
        return Ok(f64::INFINITY);
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    let a = lanczos_sum(xm);
    // Split the power to postpone overflow near the top of the range.
    let half = t.powf(0.5 * (xm + 0.5));
    Ok((2.0 * PI).sqrt() * half * (half * (-t).exp()) * a)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::Domain { function: "ln_gamma", x });
    }
    if x < 0.5 {
        // Γ(x) = Γ(1+x)/x keeps the Lanczos sum in its comfortable range.
        return Ok(ln_gamma(1.0 + x)? - x.ln());
    }
    if x < 20.0 {
        return Ok(gamma(x)?.ln());
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (xm + 0.5) * t.ln() - t + lanczos_sum(xm).ln())
}

/// 1/Γ(x), an entire function: exactly zero at nonpositive integers.
pub fn gamma_reciprocal(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x.abs() < 0.5 {
        // 1/Γ(x) = x / Γ(1+x), series keeps full relative accuracy near 0.
        return x * rgamma_1p_series(x);
    }
    if x >= 0.5 {
        if x > 171.0 {
            return match ln_gamma(x) {
                Ok(lg) => (-lg).exp(),
                Err(_) => 0.0,
            };
        }
        return 1.0 / gamma(x).unwrap_or(f64::INFINITY);
    }
    // Reflection: 1/Γ(x) = sin(πx) Γ(1−x) / π.
    let y = 1.0 - x;
    let s = sin_pi(x);
    if y < 171.0 {
        s * gamma(y).unwrap_or(f64::INFINITY) / PI
    } else {
        let lg = ln_gamma(y).unwrap_or(f64::INFINITY);
        s.signum() * (lg + s.abs().ln() - PI.ln()).exp()
    }
}

/// 1/Γ(1+x) by its Taylor series; accurate for |x| ≤ 1/2.
pub(crate) fn rgamma_1p_series(x: f64) -> f64 {
    RGAMMA1P.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// The pair (γ₁, γ₂) with γ₁ = (1/Γ(1−x) − 1/Γ(1+x))/(2x) and
/// γ₂ = (1/Γ(1−x) + 1/Γ(1+x))/2, for |x| ≤ 1/2.
pub(crate) fn temme_gammas(x: f64) -> (f64, f64) {
    let x2 = x * x;
    let mut odd = 0.0;
    let mut even = 0.0;
    for (k, c) in RGAMMA1P.iter().enumerate().rev() {
        if k % 2 == 0 {
            even = even * x2 + c;
        } else {
            odd = odd * x2 + c;
        }
    }
    (-odd, even)
}

/// d/dx [1/Γ(x)] = −ψ(x)/Γ(x), finite everywhere.
pub fn gamma_reciprocal_deriv(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        let k = (-x) as u32;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        return sign * factorial_exact(k);
    }
    let r = gamma_reciprocal(x);
    -digamma(x).unwrap_or(0.0) * r
}

/// Digamma ψ(x) = Γ′(x)/Γ(x).
pub fn digamma(x: f64) -> Result<f64, SpecFunError> {
    if x.is_nan() {
        return Err(SpecFunError::Domain { function: "digamma", x });
    }
    if is_nonpositive_integer(x) {
        return Err(SpecFunError::Pole { function: "digamma", x });
    }
    if x < 0.0 {
        // ψ(x) = ψ(1−x) − π cot(πx)
        let cot = cos_pi(x) / sin_pi(x);
        return Ok(digamma(1.0 - x)? - PI * cot);
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    Ok(acc + y.ln() - 0.5 / y - series)
}

/// Trigamma ψ′(x).
pub fn trigamma(x: f64) -> Result<f64, SpecFunError> {
    if x.is_nan() {
        return Err(SpecFunError::Domain { function: "trigamma", x });
    }
    if is_nonpositive_integer(x) {
        return Err(SpecFunError::Pole { function: "trigamma", x });
    }
    if x < 0.0 {
        // ψ′(1−x) + ψ′(x) = π² / sin²(πx)
        let s = sin_pi(x);
        return Ok(PI * PI / (s * s) - trigamma(1.0 - x)?);
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc += 1.0 / (y * y);
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let series = inv
        + 0.5 * inv2
        + inv
            * inv2
            * (1.0 / 6.0
                - inv2
                    * (1.0 / 30.0
                        - inv2
                            * (1.0 / 42.0
                                - inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0 - inv2 * (691.0 / 2730.0 - inv2 * 7.0 / 6.0))))));
    Ok(acc + series)
}

/// Pochhammer symbol (a)_n as a float.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}

/// ln Γ(x+a) − ln Γ(x+b) for x + a, x + b > 0, without the cancellation
/// that the direct difference suffers at large x.
pub fn ln_gamma_ratio(x: f64, a: f64, b: f64) -> Result<f64, SpecFunError> {
    if !(x + a > 0.0) || !(x + b > 0.0) {
        return Err(SpecFunError::Domain { function: "ln_gamma_ratio", x });
    }
    if x < 1e3 || a.abs().max(b.abs()) > 10.0 {
        return Ok(ln_gamma(x + a)? - ln_gamma(x + b)?);
    }
    // Σ (−1)^{k+1} [B_{k+1}(a) − B_{k+1}(b)] / (k(k+1) x^k)
    let bern = |t: f64| -> [f64; 5] {
        let t2 = t * t;
        [
            t2 - t + 1.0 / 6.0,
            t * (t2 - 1.5 * t + 0.5),
            t2 * t2 - 2.0 * t2 * t + t2 - 1.0 / 30.0,
            t * (t2 * t2 - 2.5 * t2 * t + 5.0 / 3.0 * t2 - 1.0 / 6.0),
            t2 * t2 * t2 - 3.0 * t2 * t2 * t + 2.5 * t2 * t2 - 0.5 * t2 + 1.0 / 42.0,
        ]
    };
    let (ba, bb) = (bern(a), bern(b));
    let mut sum = (a - b) * x.ln();
    let mut xk = 1.0;
    for k in 1..=5 {
        xk *= x;
        let kf = k as f64;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * (ba[k - 1] - bb[k - 1]) / (kf * (kf + 1.0) * xk);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_closed_forms() {
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert!(rel(gamma(1.5).unwrap(), 0.5 * PI.sqrt()) < 1e-14);
        assert!(rel(gamma(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-14);
        assert!(gamma(0.0).is_err());
        assert!(gamma(-3.0).is_err());
    }

    #[test]
    fn gamma_reference_values() {
        // mpmath, 30 digits
        let cases = [
            (0.1, 9.513_507_698_668_732),
            (2.7, 1.544_685_845_850_593_8),
            (12.3, 83_385_367.899_969_85),
            (33.7, 3.032_162_654_739_841_6e36),
            (-2.3, -1.447_107_394_255_917_3),
            (49.5, 8.667_601_843_135_272e61),
        ];
        for (x, g) in cases {
            assert!(rel(gamma(x).unwrap(), g) < 1e-13, "x={x}: {} vs {g}", gamma(x).unwrap());
        }
    }

    #[test]
    fn reciprocal_is_entire() {
        for k in 0..20 {
            assert_eq!(gamma_reciprocal(-(k as f64)), 0.0);
        }
        assert!(rel(gamma_reciprocal(1e-8), 1e-8 * (1.0 + EULER_GAMMA * 1e-8)) < 1e-15);
        assert!(rel(gamma_reciprocal(-2.3), 1.0 / -1.447_107_394_255_917_3) < 1e-13);
        assert!(rel(gamma_reciprocal_deriv(-3.0), -6.0) < 1e-15);
        let h = 1e-5;
        let fd = (gamma_reciprocal(-3.0 + h) - gamma_reciprocal(-3.0 - h)) / (2.0 * h);
        assert!(rel(fd, -6.0) < 1e-8);
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-15);
        assert!(rel(digamma(2.0).unwrap(), 1.0 - EULER_GAMMA) < 1e-14);
        assert!(rel(digamma(0.5).unwrap(), -EULER_GAMMA - 2.0 * 2f64.ln()) < 1e-14);
        // mpmath
        assert!(rel(digamma(-2.3).unwrap(), 3.317_323_157_561_820) < 1e-12);
        assert!(rel(digamma(37.2).unwrap(), 3.602_807_686_506_357_5) < 1e-14);
        assert!(digamma(-4.0).is_err());
    }

    #[test]
    fn trigamma_values() {
        assert!(rel(trigamma(1.0).unwrap(), PI * PI / 6.0) < 1e-14);
        assert!(rel(trigamma(0.5).unwrap(), PI * PI / 2.0) < 1e-14);
        // mpmath
        assert!(rel(trigamma(-2.3).unwrap(), 14.725_912_160_961_279) < 1e-12);
        assert!(rel(trigamma(7.25).unwrap(), 0.147_879_233_158_932_17) < 1e-13);
    }

    #[test]
    fn trig_pi_helpers() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(cos_pi(2.5), 0.0);
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-1.25) - (PI * -1.25).sin()).abs() < 1e-15);
        for x in [-3.7, -0.9, 0.1, 0.6, 1.3, 4.8] {
            assert!((sin_pi(x) - (PI * x).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn temme_gammas_match_direct() {
        let x: f64 = 0.3;
        let (g1, g2) = temme_gammas(x);
        let rp = 1.0 / gamma(1.0 + x).unwrap();
        let rm = 1.0 / gamma(1.0 - x).unwrap();
        assert!(rel(g1, (rm - rp) / (2.0 * x)) < 1e-13);
        assert!(rel(g2, (rm + rp) / 2.0) < 1e-14);
    }

    #[test]
    fn ln_gamma_ratio_values() {
        let cases = [
            (1e3, 0.35, -0.35, 4.8350786226482024),
            (2.5e4, 0.5, 0.2, 3.0379875311679015),
            (1e20, 0.65, 0.35, 13.815510557964274),
            (30.0, 0.1, 0.9, -2.7209712367825895),
        ];
        for (x, a, b, want) in cases {
            let got = ln_gamma_ratio(x, a, b).unwrap();
            assert!((got - want).abs() < 1e-13 * want.abs(), "{x} {a} {b}: {got}");
        }
    }
}
