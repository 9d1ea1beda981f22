//! Euler–Maclaurin constants of decreasing summands and the real zeta function.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numeric::{gauss_kronrod, tanh_sinh, KahanSum};

/// `C ≈ lim_b (Σ_{j=a}^{b} f(j) − ∫_a^b f)`, with the truncation actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummationEstimate {
    pub constant: f64,
    /// `f(b_used)`: the order of the first-order Euler–Maclaurin remainder.
    pub error_bracket: f64,
    pub b_used: u64,
}

const FIRST_TRUNCATION: u64 = 1 << 10;
const MAX_TRUNCATION: u64 = 1 << 30;

/// Extracts the Euler–Maclaurin constant of a nonnegative decreasing `f`.
///
/// `b` doubles from 2¹⁰ until `f(b) <= target_tol`. The partial sum is
/// compensated and the integral is accumulated segment by segment with
/// adaptive Gauss–Kronrod.
pub fn euler_maclaurin_constant<F>(f: F, a: u64, target_tol: f64) -> Result<SummationEstimate>
where
    F: Fn(f64) -> f64,
{
    if a == 0 {
        return domain("Euler–Maclaurin start index must be >= 1");
    }
    if !(target_tol > 0.0) {
        return Err(Error::NonPositiveInput(target_tol));
    }
    let mut sum = KahanSum::new();
    let mut integral = KahanSum::new();
    let mut prev = f(a as f64);
    if !prev.is_finite() || prev < 0.0 {
        return domain(format!("summand f({a}) = {prev} is not a finite nonnegative value"));
    }
    sum.add(prev);
    let mut j = a;
    let mut integrated_to = a as f64;
    let mut b = FIRST_TRUNCATION.max(a.next_power_of_two());
    loop {
        while j < b {
            j += 1;
            let v = f(j as f64);
            if !v.is_finite() {
                return domain(format!("summand f({j}) is not finite"));
            }
            if v > prev {
                return Err(Error::NotDecreasing(j));
            }
            sum.add(v);
            prev = v;
        }
        let seg = gauss_kronrod(&f, integrated_to, b as f64, 0.0, 1e-14)?;
        integral.add(seg.value);
        integrated_to = b as f64;
        if prev <= target_tol {
            return Ok(SummationEstimate {
                constant: sum.value() - integral.value(),
                error_bracket: prev,
                b_used: b,
            });
        }
        b *= 2;
        if b > MAX_TRUNCATION {
            return Err(Error::Budget(format!(
                "summand still {prev:e} > {target_tol:e} at b = 2^30"
            )));
        }
    }
}

/// Pole guard around `d = 1`.
pub const POLE_GUARD: f64 = 1e-9;

/// Bernoulli numbers `B_2, B_4, …, B_30`.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Above this exponent the plain series is summed directly.
const DIRECT_SERIES_FROM: f64 = 64.0;

/// Riemann zeta on `(0, 1) ∪ (1, ∞)`, analytically continued below 1.
///
/// Sums `j^{-d}` for `j < N` and closes with the Euler–Maclaurin tail
/// `N^{1-d}/(d−1) + N^{-d}/2 + Σ_k B_{2k}/(2k)! · d(d+1)…(d+2k−2) · N^{1-d-2k}`,
/// adding correction terms until one falls below `tol`.
pub fn zeta_extended(d: f64, tol: f64) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return domain(format!("zeta_extended needs d > 0, got {d}"));
    }
    if (d - 1.0).abs() < POLE_GUARD {
        return Err(Error::PoleAtOne(d));
    }
    if !(tol > 0.0) {
        return Err(Error::NonPositiveInput(tol));
    }
    let mut sum = KahanSum::new();
    if d >= DIRECT_SERIES_FROM {
        for j in (1..).map(|j: u32| f64::from(j)) {
            let t = j.powf(-d);
            sum.add(t);
            if t <= f64::EPSILON * f64::EPSILON {
                break;
            }
        }
        return Ok(sum.value());
    }
    let n = 32.0f64;
    for j in (1..32).rev() {
        sum.add(f64::from(j).powf(-d));
    }
    sum.add(n.powf(1.0 - d) / (d - 1.0));
    sum.add(0.5 * n.powf(-d));
    // poch = d(d+1)…(d+2k−2), power = N^{1−d−2k}, fact = (2k)!
    let mut poch = d;
    let mut power = n.powf(-d - 1.0);
    let mut fact = 2.0;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / fact * poch * power;
        sum.add(term);
        if term.abs() <= tol.min(f64::EPSILON * sum.value().abs().max(1.0)) {
            return Ok(sum.value());
        }
        let m = 2.0 * k as f64 + 2.0;
        poch *= (d + m - 1.0) * (d + m);
        power /= n * n;
        fact *= (m + 1.0) * (m + 2.0);
    }
    if (BERNOULLI_EVEN[14] / fact * poch * power).abs() <= tol {
        return Ok(sum.value());
    }
    Err(Error::Budget(format!("zeta({d}) did not settle to {tol:e}")))
}

/// `Σ_{j≥start} g(j)` for a decreasing integrable `g`, using the explicit
/// sum up to `b` plus `∫_{b+½}^∞ g`. `b` doubles until the total settles.
pub fn tail_sum<G>(g: G, start: u64, tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    if start == 0 {
        return domain("tail_sum start index must be >= 1");
    }
    let tail_integral = |c: f64| -> Result<f64> {
        // u = c / v over v in (0, 1].
        let r = tanh_sinh(
            |v, _, _| if v <= 0.0 { 0.0 } else { g(c / v) * c / (v * v) },
            0.0,
            1.0,
            1e-13,
        )?;
        Ok(r.value)
    };
    let mut sum = KahanSum::new();
    let mut b = start + 63;
    for j in start..=b {
        sum.add(g(j as f64));
    }
    let mut prev = sum.value() + tail_integral(b as f64 + 0.5)?;
    loop {
        let next_b = start + 2 * (b - start + 1) - 1;
        if next_b > MAX_TRUNCATION {
            return Err(Error::Budget(format!("tail sum did not settle to {tol:e}")));
        }
        for j in b + 1..=next_b {
            sum.add(g(j as f64));
        }
        b = next_b;
        let cur = sum.value() + tail_integral(b as f64 + 0.5)?;
        if !cur.is_finite() {
            return domain("tail sum is not finite");
        }
        if (cur - prev).abs() <= tol * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
}
