//! Numerical integration primitives: adaptive Gauss–Kronrod on finite
//! intervals and double-exponential rules for endpoint singularities and
//! half-lines.
//!
//! Every routine can also emit the nodes and weights it settled on, so a
//! rule adapted to one integrand can be reused for related integrands
//! (e.g. all entries of a Gram matrix).

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::f64::consts::PI;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// A fixed set of quadrature nodes and weights.
#[derive(Debug, Clone, Default)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        pairwise_sum(
            &self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(x, w)| w * f(*x))
                .collect::<Vec<_>>(),
        )
    }

    pub fn extend(&mut self, other: QuadRule) {
        self.nodes.extend(other.nodes);
        self.weights.extend(other.weights);
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Fixed-order pairwise summation, so results do not depend on how the
/// terms were produced.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n if n <= 8 => v.iter().sum(),
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// Result of an integration with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.a.partial_cmp(&self.a).unwrap_or(Ordering::Equal))
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn gk15_rule(a: f64, b: f64, rule: &mut QuadRule) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    for j in 0..7 {
        rule.nodes.push(c - h * XGK[j]);
        rule.weights.push(WGK[j] * h);
        rule.nodes.push(c + h * XGK[j]);
        rule.weights.push(WGK[j] * h);
    }
    rule.nodes.push(c);
    rule.weights.push(WGK[7] * h);
}

/// Adaptive Gauss–Kronrod (7/15) on [a, b]. Returns the result and the
/// rule formed by the accepted panels.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> (QuadResult, QuadRule) {
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&f, a, b);
    heap.push(Panel { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    let mut converged = false;
    while heap.len() < max_panels {
        if err <= abs_tol.max(rel_tol * total.abs()) {
            converged = true;
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&f, worst.a, m);
        let (v2, e2) = gk15(&f, m, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: m, value: v1, error: e1 });
        heap.push(Panel { a: m, b: worst.b, value: v2, error: e2 });
    }
    if !converged && err <= abs_tol.max(rel_tol * total.abs()) {
        converged = true;
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap_or(Ordering::Equal));
    let value = pairwise_sum(&panels.iter().map(|p| p.value).collect::<Vec<_>>());
    let error = panels.iter().map(|p| p.error).sum();
    let mut rule = QuadRule::default();
    for p in &panels {
        gk15_rule(p.a, p.b, &mut rule);
    }
    (QuadResult { value, error, converged }, rule)
}

/// Nodes of the tanh–sinh rule at abscissa t (and −t), as (x, weight)
/// pairs. The distance to the nearby endpoint is computed directly to keep
/// resolution next to a singular end.
fn tanh_sinh_nodes(a: f64, b: f64, t: f64) -> Vec<(f64, f64)> {
    let half = 0.5 * (b - a);
    let s = 0.5 * PI * t.sinh();
    let ch = s.cosh();
    let w = half * 0.5 * PI * t.cosh() / (ch * ch);
    let dist = half / (s.exp() * ch); // half·(1 − tanh s)
    let mut out = Vec::with_capacity(2);
    let xr = b - dist;
    if xr > a && xr < b {
        out.push((xr, w));
    }
    if t != 0.0 {
        let xl = a + dist;
        if xl > a && xl < b {
            out.push((xl, w));
        }
    }
    out
}

const TANH_SINH_T_MAX: f64 = 6.0;

/// Tanh–sinh rule on [a, b]; tolerant of integrable endpoint singularities.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> (QuadResult, QuadRule) {
    let level_sum = |h: f64, start: i64, step: i64| -> f64 {
        let mut s = 0.0;
        let mut k = start;
        while k as f64 * h <= TANH_SINH_T_MAX {
            for (x, w) in tanh_sinh_nodes(a, b, k as f64 * h) {
                s += w * f(x);
            }
            k += step;
        }
        s
    };
    let mut h = 0.5;
    let mut sum = level_sum(h, 0, 1);
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    let mut converged = false;
    for level in 0..10 {
        h *= 0.5;
        sum += level_sum(h, 1, 2);
        let next = sum * h;
        error = (next - estimate).abs();
        estimate = next;
        if level >= 2 && error <= abs_tol.max(rel_tol * estimate.abs()) {
            converged = true;
            break;
        }
    }
    let mut rule = QuadRule::default();
    let mut k: i64 = 0;
    while k as f64 * h <= TANH_SINH_T_MAX {
        for (x, w) in tanh_sinh_nodes(a, b, k as f64 * h) {
            rule.nodes.push(x);
            rule.weights.push(w * h);
        }
        k += 1;
    }
    (QuadResult { value: estimate, error, converged }, rule)
}

/// Exp–sinh rule on [a, ∞) for integrands with at most algebraic
/// singularities at `a` and fast decay at infinity.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64, rel_tol: f64, abs_tol: f64) -> QuadResult {
    // x = a + exp(π/2 sinh t)
    let term = |t: f64| -> f64 {
        let u = 0.5 * PI * t.sinh();
        if u > 700.0 || u < -700.0 {
            return 0.0;
        }
        let x = u.exp();
        let w = 0.5 * PI * t.cosh() * x;
        let v = f(a + x);
        if v == 0.0 || !v.is_finite() {
            if v.is_finite() { 0.0 } else { f64::NAN }
        } else {
            w * v
        }
    };
    let t_lo: f64 = -4.5;
    let t_hi = 4.5;
    let mut h = 0.5;
    let mut sum = 0.0;
    let mut k = (t_lo / h).ceil() as i64;
    while k as f64 * h <= t_hi {
        let v = term(k as f64 * h);
        if v.is_finite() {
            sum += v;
        }
        k += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    let mut converged = false;
    for level in 0..10 {
        h *= 0.5;
        let mut k = (t_lo / h).ceil() as i64;
        if k % 2 == 0 {
            k += 1;
        }
        while k as f64 * h <= t_hi {
            let v = term(k as f64 * h);
            if v.is_finite() {
                sum += v;
            }
            k += 2;
        }
        let next = sum * h;
        error = (next - estimate).abs();
        estimate = next;
        if level >= 2 && error <= abs_tol.max(rel_tol * estimate.abs()) {
            converged = true;
            break;
        }
    }
    QuadResult { value: estimate, error, converged }
}
