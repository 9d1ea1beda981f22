//! Dirichlet–Neumann bracketing of `N(λ)` for horns
//! `Ω = {x >= 1, |y| <= L·g(x)}` by unit-width rectangles.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::dimension::{DimensionFunction, Regime};
use crate::error::{Error, Result};
use crate::numeric::{guarded_floor, last_true};

#[derive(Debug, Clone)]
pub struct HornDomain {
    df: DimensionFunction,
    scale: f64,
}

impl HornDomain {
    pub fn new(df: DimensionFunction, scale: f64) -> Result<Self> {
        if df.regime() != Regime::NonIntegrable {
            return Err(Error::RegimeError(format!(
                "a horn profile needs d > 1, got d = {}",
                df.d()
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::NonPositiveInput(scale));
        }
        Ok(Self { df, scale })
    }

    pub fn df(&self) -> &DimensionFunction {
        &self.df
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Half-width `L·g(x)`.
    pub fn profile(&self, x: f64) -> Result<f64> {
        Ok(self.scale * self.df.eval_g(x)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BracketResult {
    pub lower: u64,
    pub upper: u64,
    pub j_max_lower: u64,
    pub j_max_upper: u64,
}

/// Number of `k >= 1` with `(kπ / 2hw)² <= λ`.
fn k_columns(hw: f64, lambda: f64) -> u64 {
    if !(hw > 0.0 && lambda > 0.0) {
        return 0;
    }
    guarded_floor(2.0 * hw * lambda.sqrt() / PI)
}

/// `Σ_k ⌊√(λ − (kπ/2hw)²) / π⌋`: lattice points with `h, k >= 1`.
fn interior_points(hw: f64, lambda: f64, kmax: u64) -> u64 {
    let step = PI / (2.0 * hw);
    (1..=kmax)
        .map(|k| {
            let r = lambda - (k as f64 * step).powi(2);
            guarded_floor(r.max(0.0).sqrt() / PI)
        })
        .sum()
}

/// `#{(h, k) : h >= 0, k >= 1, h²π² + k²π²/(4 hw²) <= λ}`, the eigenvalue
/// count of a `1 × 2hw` rectangle with Neumann ends and Dirichlet sides.
/// Nonpositive inputs count nothing.
pub fn rectangle_count_mixed(half_width: f64, lambda: f64) -> u64 {
    let kmax = k_columns(half_width, lambda);
    kmax + interior_points(half_width, lambda, kmax)
}

/// As [`rectangle_count_mixed`] with `h >= 1` (Dirichlet on all sides).
pub fn rectangle_count_dirichlet(half_width: f64, lambda: f64) -> u64 {
    let kmax = k_columns(half_width, lambda);
    interior_points(half_width, lambda, kmax)
}

const MAX_RECTANGLES: u64 = 1 << 30;
const CHUNK: u64 = 1 << 10;

fn sum_rectangles<F>(last: u64, term: F) -> Result<u64>
where
    F: Fn(u64) -> Result<u64> + Sync,
{
    if last == 0 {
        return Ok(0);
    }
    let chunks = (last - 1) / CHUNK + 1;
    let parts: Vec<Result<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = 1 + c * CHUNK;
            let hi = (lo + CHUNK - 1).min(last);
            let mut acc = 0u64;
            for j in lo..=hi {
                acc = acc.checked_add(term(j)?).ok_or(Error::Overflow)?;
            }
            Ok(acc)
        })
        .collect();
    parts.into_iter().try_fold(0u64, |acc, p| acc.checked_add(p?).ok_or(Error::Overflow))
}

/// Lower and upper bracket for the horn's `N(λ)`: Dirichlet rectangles
/// `[j, j+1] × [−w(j+1), w(j+1)]` inside Ω and mixed rectangles
/// `[j, j+1] × [−w(j), w(j)]` covering it. Each sum stops at the last
/// rectangle that still has an eigenvalue below `λ`.
pub fn horn_bracket(horn: &HornDomain, lambda: f64) -> Result<BracketResult> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::NonPositiveInput(lambda));
    }
    let width = |j: u64| horn.profile(j as f64);
    // Analytic estimate of the last live rectangle, refined exactly below.
    let guess = horn
        .df
        .eval_f(horn.scale * 2.0 * lambda.sqrt() / PI)
        .ok()
        .filter(|g| g.is_finite())
        .map_or(1, |g| g.min(MAX_RECTANGLES as f64) as u64);

    let mut err = None;
    let mut cutoff = |live: &dyn Fn(f64) -> bool, shift: u64| -> u64 {
        let mut evals = 0;
        let mut pred = |j: u64| match width(j + shift) {
            Ok(w) => live(w),
            Err(e) => {
                err.get_or_insert(e);
                false
            }
        };
        if !pred(1) {
            return 0;
        }
        last_true(1, guess, MAX_RECTANGLES + 1, &mut evals, pred)
    };
    let j_upper = cutoff(&|w| k_columns(w, lambda) >= 1, 0);
    let j_lower = cutoff(&|w| rectangle_count_dirichlet(w, lambda) >= 1, 1);
    if let Some(e) = err {
        return Err(e);
    }
    if j_upper > MAX_RECTANGLES || j_lower > MAX_RECTANGLES {
        return Err(Error::Budget(format!("more than 2^30 rectangles at λ = {lambda}")));
    }
    let upper = sum_rectangles(j_upper, |j| Ok(rectangle_count_mixed(width(j)?, lambda)))?;
    let lower = sum_rectangles(j_lower, |j| Ok(rectangle_count_dirichlet(width(j + 1)?, lambda)))?;
    Ok(BracketResult { lower, upper, j_max_lower: j_lower, j_max_upper: j_upper })
}

/// Leading-order predictions
/// `lower ≈ √λ/π · f_L(√λ/2π) / (d−1)` and `upper ≈ d/(d−1) · √λ · f_L(2√λ/π)`.
pub fn horn_asymptotic_bounds(horn: &HornDomain, lambda: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::NonPositiveInput(lambda));
    }
    let d = horn.df.d();
    let root = lambda.sqrt();
    let f_l = |x: f64| horn.df.eval_f(horn.scale * x);
    let lower = root / PI * f_l(root / (2.0 * PI))? / (d - 1.0);
    let upper = d / (d - 1.0) * root * f_l(2.0 * root / PI)?;
    Ok((lower, upper))
}

/// Quarter-ellipse area plus the `h = 0` column: an upper bound for
/// [`rectangle_count_mixed`].
pub fn mixed_count_bound(half_width: f64, lambda: f64) -> f64 {
    half_width * lambda / (2.0 * PI) + 2.0 * half_width * lambda.sqrt() / PI
}

/// Lower bound for [`rectangle_count_dirichlet`] used in the horn's lower chain.
pub fn dirichlet_count_bound(half_width: f64, lambda: f64) -> f64 {
    half_width * lambda / (2.0 * PI * PI) - lambda.sqrt() / PI - 2.0 * half_width * lambda.sqrt() / PI - 1.0
}
