//! Adaptive Gauss–Kronrod and tanh-sinh quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

// Kronrod nodes on [0, 1); odd indices are the 7-point Gauss nodes.
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
    0.022_935_322_010_529_225,
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

const MAX_SUBDIVISIONS: usize = 2000;

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive 15-point Gauss–Kronrod quadrature of `f` over `[a, b]`.
///
/// Stops once the summed error estimate is below `max(abs_tol, rel_tol * |I|)`.
pub fn gauss_kronrod<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 0 });
    }
    let (value, error) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut evaluations = 15;

    loop {
        if !total.is_finite() {
            return Err(Error::QuadratureNonConvergence { estimate: total, error: total_err });
        }
        if total_err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        if heap.len() >= MAX_SUBDIVISIONS {
            return Err(Error::QuadratureNonConvergence { estimate: total, error: total_err });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval can no longer be split in binary64.
            return Err(Error::QuadratureNonConvergence { estimate: total, error: total_err });
        }
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        evaluations += 30;
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Segment { a: mid, b: worst.b, value: rv, error: re });
    }

    // Re-sum to shed the drift of incremental updates.
    let mut parts: Vec<Segment> = heap.into_vec();
    parts.sort_by(|l, r| l.a.total_cmp(&r.a));
    let value = super::KahanSum::sum_iter(parts.iter().map(|s| s.value));
    let error_estimate = parts.iter().map(|s| s.error).sum();
    Ok(QuadResult { value, error_estimate, evaluations })
}

const TANH_SINH_MAX_LEVEL: u32 = 12;
const TANH_SINH_T_MAX: f64 = 6.5;

/// Tanh-sinh (double exponential) quadrature over `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)`, where both distances are
/// computed without cancellation so that endpoint singularities can be
/// evaluated accurately. Non-finite samples are dropped.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if !(b > a) {
        return if a == b {
            Ok(QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 0 })
        } else {
            Err(Error::DomainError(format!("tanh_sinh: empty interval [{a}, {b}]")))
        };
    }
    let half = 0.5 * (b - a);
    let mut evaluations = 0usize;

    // Contribution of the abscissa pair at +t and -t (or the centre when t == 0).
    let mut sample = |t: f64| -> f64 {
        let s = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * s.abs()).exp();
        // cosh(t) / cosh(s)^2 written to avoid overflow for large s.
        let weight = half * FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        // Distance from the nearer endpoint, and from the farther one.
        let near = half * 2.0 * e / (1.0 + e);
        let far = 2.0 * half - near;
        let mut acc = 0.0;
        let mut add = |x: f64, da: f64, db: f64| {
            evaluations += 1;
            let v = weight * f(x, da, db);
            if v.is_finite() {
                acc += v;
            }
        };
        if t == 0.0 {
            add(a + half, half, half);
        } else if near > 0.0 {
            add(b - near, far, near);
            add(a + near, near, far);
        }
        acc
    };

    let mut h = 1.0;
    let mut sum = sample(0.0);
    let mut k = 1;
    while (k as f64) * h <= TANH_SINH_T_MAX {
        sum += sample(k as f64 * h);
        k += 1;
    }
    let mut estimate = h * sum;

    for _ in 0..TANH_SINH_MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= TANH_SINH_T_MAX {
            sum += sample(k as f64 * h);
            k += 2;
        }
        let next = h * sum;
        let delta = (next - estimate).abs();
        estimate = next;
        if delta <= tol * estimate.abs().max(1.0) {
            return Ok(QuadResult { value: estimate, error_estimate: delta, evaluations });
        }
    }
    Err(Error::QuadratureNonConvergence {
        estimate,
        error: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_polynomials_exact() {
        let r = gauss_kronrod(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-14, 1e-14).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((r.value - exact).abs() < 1e-12);
    }

    #[test]
    fn kronrod_adapts_to_peak() {
        let r = gauss_kronrod(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-12).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((r.value - exact).abs() / exact < 1e-11, "{}", r.value);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = tanh_sinh(|_, da, _| da.powf(-0.5), 0.0, 1.0, 1e-14).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "{}", r.value);
        // ∫_0^1 ln(x) dx = -1
        let r = tanh_sinh(|_, da, _| da.ln(), 0.0, 1.0, 1e-14).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
        // ∫_{-1}^{1} (1 - x^2)^{-1/2} dx = π
        let r = tanh_sinh(|_, da, db| 1.0 / (da * db).sqrt(), -1.0, 1.0, 1e-14).unwrap();
        assert!((r.value - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_rejects_reversed_interval() {
        assert!(tanh_sinh(|x, _, _| x, 1.0, 0.0, 1e-10).is_err());
    }
}
