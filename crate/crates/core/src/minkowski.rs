//! Inner tubular neighbourhoods of a fractal string's boundary and the
//! Minkowski content and dimension read off from them.

use serde::Serialize;

use crate::dimension::DimensionFunction;
use crate::error::{domain, Error, Result};
use crate::numeric::{last_true, KahanSum};
use crate::string_spectrum::FractalString;

/// `|(∂Ω)_ε ∩ Ω| = Σ_j min(l_j, 2ε)`; `+∞` for infinite-measure strings.
pub fn tubular_measure(s: &FractalString, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::NonPositiveInput(eps));
    }
    if s.measure().is_infinite() {
        return Ok(f64::INFINITY);
    }
    let collar = 2.0 * eps;
    let wide = |j: u64| s.length(j).is_ok_and(|l| l > collar);
    let j_star = if !wide(1) {
        0
    } else {
        let limit = if s.tail().is_some() { 1 << 52 } else { s.prefix().len() as u64 };
        let guess = s
            .index_for_length(collar)
            .filter(|g| g.is_finite() && *g >= 1.0)
            .map_or(1, |g| g as u64);
        let mut evals = 0;
        last_true(1, guess, limit, &mut evals, wide)
    };
    let mut head = KahanSum::new();
    for j in 1..=j_star {
        head.add(s.length(j)?);
    }
    let rest = (s.measure() - head.value()).max(0.0);
    Ok(collar * j_star as f64 + rest)
}

/// Gauge against which the neighbourhood measure is scaled.
#[derive(Debug, Clone)]
pub enum Probe {
    /// `ε^{−(1−d)} V(ε)`
    Exponent(f64),
    /// `ε^{−1} h(ε) V(ε)`
    Function(DimensionFunction),
}

impl Probe {
    fn scale(&self, eps: f64) -> Result<f64> {
        match self {
            Probe::Exponent(d) => Ok(eps.powf(-(1.0 - d))),
            Probe::Function(h) => Ok(h.eval_h(eps)? / eps),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContentEstimate {
    pub eps_grid: Vec<f64>,
    pub tubular: Vec<f64>,
    pub values: Vec<f64>,
    /// Max over the last quartile of `values`.
    pub upper: f64,
    /// Min over the last quartile of `values`.
    pub lower: f64,
    /// `(upper − lower)/upper <= MEASURABLE_SPREAD`; a reporting heuristic.
    pub measurable: bool,
}

pub const MEASURABLE_SPREAD: f64 = 0.05;

fn check_eps_grid(eps_grid: &[f64]) -> Result<()> {
    if eps_grid.is_empty() {
        return domain("epsilon grid is empty");
    }
    if eps_grid.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return domain("epsilon grid entries must be positive");
    }
    if eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return domain("epsilon grid must be strictly decreasing");
    }
    Ok(())
}

fn last_quartile(n: usize, min_len: usize) -> std::ops::Range<usize> {
    let len = (n / 4).max(min_len).min(n);
    n - len..n
}

pub fn minkowski_content(s: &FractalString, probe: &Probe, eps_grid: &[f64]) -> Result<ContentEstimate> {
    check_eps_grid(eps_grid)?;
    if s.measure().is_infinite() {
        return Err(Error::InfiniteMeasure);
    }
    let mut tubular = Vec::with_capacity(eps_grid.len());
    let mut values = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let v = tubular_measure(s, eps)?;
        tubular.push(v);
        values.push(probe.scale(eps)? * v);
    }
    let window = &values[last_quartile(values.len(), 1)];
    let upper = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lower = window.iter().copied().fold(f64::INFINITY, f64::min);
    let measurable = upper > 0.0 && (upper - lower) / upper <= MEASURABLE_SPREAD;
    Ok(ContentEstimate { eps_grid: eps_grid.to_vec(), tubular, values, upper, lower, measurable })
}

/// Least-squares slope of `ln V` against `ln(1/ε)` over the last quartile.
fn measure_slope(s: &FractalString, eps_grid: &[f64]) -> Result<f64> {
    let range = last_quartile(eps_grid.len(), 2);
    let mut pts = Vec::with_capacity(range.len());
    for &eps in &eps_grid[range] {
        let v = tubular_measure(s, eps)?;
        if !(v > 0.0) {
            return domain("tubular measure vanished");
        }
        pts.push(((1.0 / eps).ln(), v.ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

/// Minkowski dimension as the probe exponent at which the scaled
/// neighbourhood measure switches from diverging to vanishing.
///
/// The growth rate of the exponent-`d` probe is `(1 − d) + σ`, `σ` being the
/// fitted slope of `ln V`; its sign is bisected between the grid probes
/// that bracket the switch. A string whose `d = 0` probe already stays
/// bounded has a finite boundary and dimension 0.
pub fn dimension_scan(s: &FractalString, d_grid: &[f64], eps_grid: &[f64]) -> Result<f64> {
    check_eps_grid(eps_grid)?;
    if eps_grid.len() < 2 {
        return domain("dimension scan needs at least two epsilon values");
    }
    if d_grid.is_empty() || d_grid.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
        return domain("probe exponents must lie in (0, 1)");
    }
    if d_grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("probe exponents must be increasing");
    }
    if s.measure().is_infinite() {
        return Err(Error::InfiniteMeasure);
    }
    let sigma = measure_slope(s, eps_grid)?;
    let growth = |d: f64| (1.0 - d) + sigma;
    let diverges = |d: f64| growth(d) > 0.0;

    let Some(first_vanishing) = d_grid.iter().position(|&d| !diverges(d)) else {
        return Err(Error::NoCrossover);
    };
    if first_vanishing == 0 {
        return if growth(0.0) <= 1e-9 { Ok(0.0) } else { Err(Error::NoCrossover) };
    }
    let (mut lo, mut hi) = (d_grid[first_vanishing - 1], d_grid[first_vanishing]);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if diverges(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn dyadic(k0: i32, k1: i32) -> Vec<f64> {
        (k0..=k1).map(|k| 2f64.powi(-k)).collect()
    }

    #[test]
    fn single_interval() {
        let s = FractalString::finite(vec![1.0]).unwrap();
        assert!((tubular_measure(&s, 0.1).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(tubular_measure(&s, 0.6).unwrap(), 1.0);
        assert!(tubular_measure(&s, 0.0).is_err());
    }

    #[test]
    fn inverse_square_example() {
        let s = FractalString::power_law(0.5, 1.0).unwrap();
        let head: f64 = (1..=9).map(|j| (j as f64).powi(-2)).sum();
        let want = 0.09 + (PI * PI / 6.0 - head);
        let got = tubular_measure(&s, 0.005).unwrap();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        assert!((got - 0.195_166_335_681_685_75).abs() < 1e-12);
    }

    #[test]
    fn tubular_monotone_and_capped() {
        let s = FractalString::power_law(0.75, 1.0).unwrap();
        let mut prev = 0.0;
        for k in (0..30).rev() {
            let v = tubular_measure(&s, 2f64.powi(-k)).unwrap();
            assert!(v >= prev && v <= s.measure() + 1e-12);
            prev = v;
        }
        assert!((tubular_measure(&s, 0.5).unwrap() - s.measure()).abs() < 1e-12);
        let inf = FractalString::power_law(2.0, 1.0).unwrap();
        assert_eq!(tubular_measure(&inf, 0.1).unwrap(), f64::INFINITY);
    }

    #[test]
    fn content_of_power_law() {
        let s = FractalString::power_law(0.5, 1.0).unwrap();
        let grid = dyadic(4, 20);
        let c = minkowski_content(&s, &Probe::Exponent(0.5), &grid).unwrap();
        let want = 2f64.sqrt() / 0.5;
        assert!((c.values.last().unwrap() / want - 1.0).abs() < 0.03);
        assert!(c.lower <= c.upper);
        let up = minkowski_content(&s, &Probe::Exponent(0.3), &grid).unwrap();
        assert!(up.values.last().unwrap() > &(10.0 * up.values[0]));
        let down = minkowski_content(&s, &Probe::Exponent(0.8), &grid).unwrap();
        assert!(down.values.last().unwrap() < &(0.1 * down.values[0]));
    }

    #[test]
    fn h_probe_matches_exponent_probe() {
        let s = FractalString::power_law(0.5, 2.0).unwrap();
        let grid = dyadic(3, 16);
        let a = minkowski_content(&s, &Probe::Exponent(0.5), &grid).unwrap();
        let h = DimensionFunction::pure_power(0.5).unwrap();
        let b = minkowski_content(&s, &Probe::Function(h), &grid).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() <= 4.0 * f64::EPSILON * x.abs());
        }
    }

    #[test]
    fn scan_recovers_dimension() {
        let d_grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        let eps = dyadic(4, 20);
        for d in [0.5, 0.25] {
            let s = FractalString::power_law(d, 1.0).unwrap();
            let got = dimension_scan(&s, &d_grid, &eps).unwrap();
            assert!((got - d).abs() < 0.02, "d={d}: {got}");
        }
        let finite = FractalString::finite(vec![1.0, 0.5, 0.25]).unwrap();
        assert_eq!(dimension_scan(&finite, &d_grid, &eps).unwrap(), 0.0);
    }

    #[test]
    fn scan_errors() {
        let s = FractalString::power_law(0.5, 1.0).unwrap();
        let eps = dyadic(4, 20);
        assert_eq!(dimension_scan(&s, &[0.6, 0.7, 0.8], &eps), Err(Error::NoCrossover));
        assert_eq!(dimension_scan(&s, &[0.1, 0.2], &eps), Err(Error::NoCrossover));
        let inf = FractalString::power_law(2.0, 1.0).unwrap();
        assert_eq!(dimension_scan(&inf, &[0.1, 0.9], &eps), Err(Error::InfiniteMeasure));
        assert_eq!(minkowski_content(&inf, &Probe::Exponent(0.5), &eps), Err(Error::InfiniteMeasure));
    }
}
