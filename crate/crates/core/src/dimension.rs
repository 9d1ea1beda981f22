//! Dimension functions `h` and their transforms `g = h⁻¹(1/x)`, `f = 1/h(1/x)`.
//!
//! A dimension function is asymptotically `d`-homogeneous at zero. With
//! `d < 1` it generates integrable length sequences `g(j)` (finite-measure
//! strings); with `d > 1` the sequences are not summable.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::numeric::{gauss_kronrod, tanh_sinh};

/// Default relative tolerance of the numeric inversion behind [`DimensionFunction::eval_g`].
pub const DEFAULT_TOL_REL: f64 = 1e-12;

/// `PowerLogLog` is only defined (and positive) below this point; `h`
/// blows up to `+∞` as `x` approaches it, so it still maps onto `(0, ∞)`.
pub const LOG_LOG_DOMAIN_SUP: f64 = 0.581_976_706_869_326_4; // 1 / (e - 1)

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `h(x) = x^d`
    PurePower,
    /// `h(x) = x^d / log(1/x + 1)^a`
    PowerLog,
    /// `h(x) = x^d / log(log(1/x + 1))^a`
    PowerLogLog,
    /// User-supplied evaluator.
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Regime {
    /// `0 < d < 1`
    Integrable,
    /// `d > 1`
    NonIntegrable,
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct DimensionFunction {
    family: Family,
    d: f64,
    a: f64,
    custom: Option<Evaluator>,
}

impl fmt::Debug for DimensionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DimensionFunction")
            .field("family", &self.family)
            .field("d", &self.d)
            .field("a", &self.a)
            .finish()
    }
}

impl PartialEq for DimensionFunction {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.d == other.d
            && self.a == other.a
            && match (&self.custom, &other.custom) {
                (Some(l), Some(r)) => Arc::ptr_eq(l, r),
                (None, None) => true,
                _ => false,
            }
    }
}

/// Scratch state for one numeric inversion of `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformCache {
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub tol_rel: f64,
}

impl Default for TransformCache {
    fn default() -> Self {
        Self { bracket_lo: 0.0, bracket_hi: 0.0, tol_rel: DEFAULT_TOL_REL }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityReport {
    /// `max_t |h(t x)/h(x) - t^d|` for each `x` of the sequence.
    pub maxima: Vec<f64>,
    pub pass: bool,
}

fn check_exponent(d: f64) -> Result<()> {
    if !(d.is_finite() && d > 0.0) {
        return domain(format!("dimension exponent must be positive, got {d}"));
    }
    if d == 1.0 {
        return domain("dimension exponent d = 1 belongs to neither regime");
    }
    Ok(())
}

impl DimensionFunction {
    pub fn pure_power(d: f64) -> Result<Self> {
        check_exponent(d)?;
        Ok(Self { family: Family::PurePower, d, a: 0.0, custom: None })
    }

    pub fn power_log(d: f64, a: f64) -> Result<Self> {
        check_exponent(d)?;
        if !(a >= 0.0 && a.is_finite()) {
            return domain(format!("log exponent must be >= 0, got {a}"));
        }
        Ok(Self { family: Family::PowerLog, d, a, custom: None })
    }

    pub fn power_log_log(d: f64, a: f64) -> Result<Self> {
        check_exponent(d)?;
        if !(a >= 0.0 && a.is_finite()) {
            return domain(format!("log exponent must be >= 0, got {a}"));
        }
        Ok(Self { family: Family::PowerLogLog, d, a, custom: None })
    }

    /// Wraps a caller-supplied `h`. It is trusted to be increasing; the
    /// class hypotheses can be probed with [`verify_homogeneity`].
    pub fn custom<H>(d: f64, h: H) -> Result<Self>
    where
        H: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_exponent(d)?;
        Ok(Self { family: Family::Custom, d, a: 0.0, custom: Some(Arc::new(h)) })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn regime(&self) -> Regime {
        if self.d < 1.0 {
            Regime::Integrable
        } else {
            Regime::NonIntegrable
        }
    }

    /// `h` without input validation; `+∞` past the PowerLogLog domain.
    fn h_raw(&self, x: f64) -> f64 {
        match self.family {
            Family::PurePower => x.powf(self.d),
            Family::PowerLog => {
                let l = (1.0 / x).ln_1p();
                if self.a == 0.0 {
                    x.powf(self.d)
                } else {
                    x.powf(self.d) / l.powf(self.a)
                }
            }
            Family::PowerLogLog => {
                if self.a == 0.0 {
                    return x.powf(self.d);
                }
                if x >= LOG_LOG_DOMAIN_SUP {
                    return f64::INFINITY;
                }
                let ll = (1.0 / x).ln_1p().ln();
                if ll <= 0.0 {
                    f64::INFINITY
                } else {
                    x.powf(self.d) / ll.powf(self.a)
                }
            }
            Family::Custom => (self.custom.as_ref().expect("custom evaluator"))(x),
        }
    }

    pub fn eval_h(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::NonPositiveInput(x));
        }
        if self.family == Family::PowerLogLog && self.a > 0.0 && x >= LOG_LOG_DOMAIN_SUP {
            return domain(format!(
                "powerloglog h is only defined for x < 1/(e-1) ≈ {LOG_LOG_DOMAIN_SUP}, got {x}"
            ));
        }
        let v = self.h_raw(x);
        if !v.is_finite() {
            return domain(format!("h({x}) is not finite"));
        }
        Ok(v)
    }

    /// `h(t x) / h(x)`, evaluated without forming `h` at tiny arguments where possible.
    pub fn h_ratio(&self, t: f64, x: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::NonPositiveInput(t));
        }
        if !(x > 0.0) {
            return Err(Error::NonPositiveInput(x));
        }
        let v = match self.family {
            Family::PurePower => t.powf(self.d),
            Family::PowerLog => {
                let num = (1.0 / x).ln_1p();
                let den = (1.0 / (t * x)).ln_1p();
                t.powf(self.d) * (num / den).powf(self.a)
            }
            Family::PowerLogLog | Family::Custom => self.eval_h(t * x)? / self.eval_h(x)?,
        };
        if !v.is_finite() {
            return domain(format!("h({t}·{x}) / h({x}) is not finite"));
        }
        Ok(v)
    }

    /// `g(x) = h⁻¹(1/x)`, the length law generated by `h`.
    pub fn eval_g(&self, x: f64) -> Result<f64> {
        self.eval_g_with(x, &mut TransformCache::default())
    }

    pub fn eval_g_with(&self, x: f64, cache: &mut TransformCache) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::NonPositiveInput(x));
        }
        if self.family == Family::PurePower {
            return Ok(x.powf(-1.0 / self.d));
        }
        self.invert_h(1.0 / x, cache)
    }

    /// `g⁻¹(y) = 1/h(y)`.
    pub fn eval_g_inverse(&self, y: f64) -> Result<f64> {
        Ok(1.0 / self.eval_h(y)?)
    }

    /// `f(x) = 1/h(1/x)`.
    pub fn eval_f(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::NonPositiveInput(x));
        }
        if self.family == Family::PurePower {
            return Ok(x.powf(self.d));
        }
        Ok(1.0 / self.eval_h(1.0 / x)?)
    }

    /// Solves `h(y) = target` by bisection in log space, starting from the
    /// pure-power seed `target^(1/d)` and widening geometrically.
    pub fn invert_h(&self, target: f64, cache: &mut TransformCache) -> Result<f64> {
        if !(target > 0.0 && target.is_finite()) {
            return Err(Error::NonPositiveInput(target));
        }
        let sup = match self.family {
            Family::PowerLogLog if self.a > 0.0 => LOG_LOG_DOMAIN_SUP,
            _ => f64::INFINITY,
        };
        let seed = target.powf(1.0 / self.d).min(sup);
        let mut lo = seed / 10.0;
        let mut hi = (seed * 10.0).min(sup);
        let mut expansions = 0;
        loop {
            let hl = self.h_raw(lo);
            let hh = self.h_raw(hi);
            if hl.is_nan() || hh.is_nan() {
                return domain(format!("h is not finite while inverting at {target}"));
            }
            let lo_ok = hl < target;
            let hi_ok = hh > target;
            if lo_ok && hi_ok {
                break;
            }
            if hl == target {
                return Ok(lo);
            }
            if hh == target {
                return Ok(hi);
            }
            expansions += 1;
            if expansions > 64 || lo == 0.0 {
                return Err(Error::BracketFailure { target, lo, hi });
            }
            if !lo_ok {
                lo /= 10.0;
            }
            if !hi_ok {
                if hi >= sup {
                    return Err(Error::BracketFailure { target, lo, hi });
                }
                hi = (hi * 10.0).min(sup);
            }
        }
        cache.bracket_lo = lo;
        cache.bracket_hi = hi;

        while hi - lo > cache.tol_rel * lo * 0.25 {
            let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
            if mid <= lo || mid >= hi {
                break;
            }
            if self.h_raw(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        cache.bracket_lo = lo;
        cache.bracket_hi = hi;
        Ok(0.5 * (lo + hi))
    }
}

/// Measures how fast `h(t x)/h(x)` approaches `t^d` along `x_seq → 0`.
///
/// PASS means the per-`x` maxima are nonincreasing over the second half of
/// the sequence and the last one is at most `tol`. This is evidence, not a
/// proof of the homogeneity hypothesis.
pub fn verify_homogeneity(
    df: &DimensionFunction,
    t_grid: &[f64],
    x_seq: &[f64],
    tol: f64,
) -> Result<HomogeneityReport> {
    if t_grid.is_empty() || x_seq.is_empty() {
        return domain("homogeneity check needs nonempty t and x grids");
    }
    let mut maxima = Vec::with_capacity(x_seq.len());
    for &x in x_seq {
        let mut worst = 0.0f64;
        for &t in t_grid {
            let dev = (df.h_ratio(t, x)? - t.powf(df.d())).abs();
            worst = worst.max(dev);
        }
        maxima.push(worst);
    }
    let tail = &maxima[maxima.len() / 2..];
    let settling = tail.windows(2).all(|w| w[1] <= w[0]);
    let pass = settling && *maxima.last().expect("nonempty") <= tol;
    Ok(HomogeneityReport { maxima, pass })
}

/// Ratio whose limit is `d/(1-d)` (integrable regime, `∫_x^∞ g / (x g(x))`)
/// or `d/(d-1)` (non-integrable regime, `∫_1^x g / (x g(x))`).
pub fn tail_ratio(df: &DimensionFunction, x: f64) -> Result<f64> {
    if !(x >= 10.0) {
        return domain(format!("tail_ratio needs x >= 10, got {x}"));
    }
    let gx = df.eval_g(x)?;
    match df.regime() {
        Regime::Integrable => {
            // u = x / v maps [x, ∞) onto (0, 1]; integrand g(x/v) / (g(x) v²).
            let r = tanh_sinh(
                |v, _, _| {
                    if v <= 0.0 {
                        return 0.0;
                    }
                    match df.eval_g(x / v) {
                        Ok(g) => g / gx / (v * v),
                        Err(_) => f64::NAN,
                    }
                },
                0.0,
                1.0,
                1e-12,
            )?;
            Ok(r.value)
        }
        Regime::NonIntegrable => {
            // u = x e^s over s in [-ln x, 0]; integrand g(x e^s) e^s / g(x).
            let r = gauss_kronrod(
                |s| match df.eval_g(x * s.exp()) {
                    Ok(g) => g / gx * s.exp(),
                    Err(_) => f64::NAN,
                },
                -x.ln(),
                0.0,
                1e-14,
                1e-12,
            )?;
            Ok(r.value)
        }
    }
}

impl fmt::Display for DimensionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::PurePower => write!(f, "power:d={}", self.d),
            Family::PowerLog => write!(f, "powerlog:d={},a={}", self.d, self.a),
            Family::PowerLogLog => write!(f, "powerloglog:d={},a={}", self.d, self.a),
            Family::Custom => write!(f, "custom:d={}", self.d),
        }
    }
}

impl FromStr for DimensionFunction {
    type Err = Error;

    /// Parses `power:d=0.5`, `powerlog:d=0.5,a=1` or `powerloglog:d=0.5,a=2`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s
            .split_once(':')
            .ok_or_else(|| Error::DomainError(format!("expected FAMILY:d=..., got {s:?}")))?;
        let mut d = None;
        let mut a = None;
        for kv in params.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::DomainError(format!("expected key=value, got {kv:?}")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::DomainError(format!("bad number {v:?} in {s:?}")))?;
            match k.trim() {
                "d" => d = Some(v),
                "a" => a = Some(v),
                other => return domain(format!("unknown parameter {other:?} in {s:?}")),
            }
        }
        let d = d.ok_or_else(|| Error::DomainError(format!("missing d in {s:?}")))?;
        match name.trim() {
            "power" => {
                if a.is_some() {
                    return domain("power family takes no log exponent");
                }
                Self::pure_power(d)
            }
            "powerlog" => Self::power_log(d, a.unwrap_or(0.0)),
            "powerloglog" => Self::power_log_log(d, a.unwrap_or(0.0)),
            other => domain(format!("unknown dimension family {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let (l, h) = (lo.ln(), hi.ln());
        (0..n).map(|i| (l + (h - l) * i as f64 / (n - 1) as f64).exp()).collect()
    }

    fn families() -> Vec<DimensionFunction> {
        vec![
            DimensionFunction::pure_power(0.5).unwrap(),
            DimensionFunction::pure_power(2.0).unwrap(),
            DimensionFunction::power_log(0.5, 1.0).unwrap(),
            DimensionFunction::power_log(1.5, 2.0).unwrap(),
            DimensionFunction::power_log_log(0.5, 2.0).unwrap(),
            DimensionFunction::power_log_log(2.0, 1.0).unwrap(),
        ]
    }

    #[test]
    fn eval_h_examples() {
        let p = DimensionFunction::pure_power(0.5).unwrap();
        assert_eq!(p.eval_h(4.0).unwrap(), 2.0);
        let pl0 = DimensionFunction::power_log(0.5, 0.0).unwrap();
        assert_eq!(pl0.eval_h(9.0).unwrap(), 3.0);
        let pl = DimensionFunction::power_log(0.5, 1.0).unwrap();
        assert!(rel(pl.eval_h(1.0).unwrap(), std::f64::consts::LOG2_E) < 1e-15);
    }

    #[test]
    fn eval_h_errors() {
        let p = DimensionFunction::pure_power(0.5).unwrap();
        assert_eq!(p.eval_h(0.0), Err(Error::NonPositiveInput(0.0)));
        assert!(matches!(p.eval_h(-1.0), Err(Error::NonPositiveInput(_))));
        let c = DimensionFunction::custom(0.5, |_| f64::NAN).unwrap();
        assert!(matches!(c.eval_h(1.0), Err(Error::DomainError(_))));
        let ll = DimensionFunction::power_log_log(0.5, 1.0).unwrap();
        assert!(matches!(ll.eval_h(0.9), Err(Error::DomainError(_))));
    }

    #[test]
    fn constructors_reject_bad_exponents() {
        assert!(DimensionFunction::pure_power(1.0).is_err());
        assert!(DimensionFunction::pure_power(0.0).is_err());
        assert!(DimensionFunction::pure_power(-2.0).is_err());
        assert!(DimensionFunction::power_log(0.5, -1.0).is_err());
    }

    #[test]
    fn regime_follows_exponent() {
        assert_eq!(DimensionFunction::pure_power(0.3).unwrap().regime(), Regime::Integrable);
        assert_eq!(DimensionFunction::pure_power(1.3).unwrap().regime(), Regime::NonIntegrable);
    }

    #[test]
    fn eval_g_examples() {
        let p = DimensionFunction::pure_power(0.5).unwrap();
        assert_eq!(p.eval_g(16.0).unwrap(), 1.0 / 256.0);
        let p2 = DimensionFunction::pure_power(2.0).unwrap();
        assert!(rel(p2.eval_g(8.0).unwrap(), 0.353_553_390_593_273_8) < 1e-15);
        let pl = DimensionFunction::power_log(0.5, 1.0).unwrap();
        // h(1) = 1/ln 2, so g(ln 2) = 1.
        let y = pl.eval_g(std::f64::consts::LN_2).unwrap();
        assert!((y - 1.0).abs() < 1e-11, "{y}");
    }

    #[test]
    fn eval_f_examples() {
        let p = DimensionFunction::pure_power(0.5).unwrap();
        assert_eq!(p.eval_f(9.0).unwrap(), 3.0);
        let p2 = DimensionFunction::pure_power(2.0).unwrap();
        assert_eq!(p2.eval_f(3.0).unwrap(), 9.0);
        let pl = DimensionFunction::power_log(0.5, 1.0).unwrap();
        // 0.5^(-0.5) * ln 3, from an independent 40-digit evaluation.
        assert!(rel(pl.eval_f(2.0).unwrap(), 1.553_672_398_424_186_4) < 1e-14);
    }

    #[test]
    fn round_trip_h_of_g() {
        for df in families() {
            for x in log_grid(1e-6, 1e6, 61) {
                let y = df.eval_g(x).unwrap();
                let back = df.eval_h(y).unwrap();
                // Error in y is amplified by the elasticity y h'(y) / h(y).
                let dy = y * 1e-7;
                let elasticity = y * (df.eval_h(y + dy).unwrap() - df.eval_h(y - dy).unwrap()) / (2.0 * dy * back);
                let allowed = 10.0 * DEFAULT_TOL_REL * elasticity.abs().max(1.0);
                assert!(rel(back, 1.0 / x) <= allowed, "{df} x={x} err={}", rel(back, 1.0 / x));
            }
        }
    }

    #[test]
    fn f_g_duality() {
        for df in families() {
            for x in log_grid(2.0, 1e6, 41) {
                let prod = df.eval_f(x).unwrap() * df.eval_h(1.0 / x).unwrap();
                assert!((prod - 1.0).abs() <= DEFAULT_TOL_REL, "{df} x={x}");
            }
        }
    }

    #[test]
    fn transforms_are_monotone() {
        for df in families() {
            let grid = log_grid(2.0, 1e6, 80);
            let g: Vec<f64> = grid.iter().map(|&x| df.eval_g(x).unwrap()).collect();
            let f: Vec<f64> = grid.iter().map(|&x| df.eval_f(x).unwrap()).collect();
            assert!(g.windows(2).all(|w| w[1] < w[0]), "{df} g");
            assert!(f.windows(2).all(|w| w[1] > w[0]), "{df} f");
        }
    }

    #[test]
    fn h_is_strictly_increasing() {
        for df in families() {
            let grid = log_grid(1e-8, 0.5, 100);
            let h: Vec<f64> = grid.iter().map(|&x| df.eval_h(x).unwrap()).collect();
            assert!(h.windows(2).all(|w| w[0] < w[1]), "{df}");
        }
    }

    #[test]
    fn pure_power_transforms_match_powf() {
        for d in [0.25, 0.5, 0.75, 1.5, 2.0, 3.0] {
            let df = DimensionFunction::pure_power(d).unwrap();
            for x in log_grid(1e-3, 1e3, 25) {
                let g = df.eval_g(x).unwrap();
                let f = df.eval_f(x).unwrap();
                let ulp = |v: f64| f64::EPSILON * v.abs();
                assert!((g - x.powf(-1.0 / d)).abs() <= 4.0 * ulp(g));
                assert!((f - x.powf(d)).abs() <= 4.0 * ulp(f));
            }
        }
    }

    #[test]
    fn homogeneity_pure_power_is_exact() {
        let df = DimensionFunction::pure_power(0.7).unwrap();
        let xs: Vec<f64> = (1..=8).map(|k| 10f64.powi(-k)).collect();
        let rep = verify_homogeneity(&df, &[0.25, 0.5, 2.0, 3.0], &xs, 1e-12).unwrap();
        assert!(rep.maxima.iter().all(|&m| m == 0.0));
        assert!(rep.pass);
    }

    #[test]
    fn homogeneity_power_log_settles() {
        let df = DimensionFunction::power_log(0.5, 1.0).unwrap();
        let xs: Vec<f64> = (1..=8).map(|k| 10f64.powi(-k)).collect();
        let rep = verify_homogeneity(&df, &[0.5, 2.0], &xs, 0.06).unwrap();
        assert!(rep.maxima.windows(2).all(|w| w[1] < w[0]));
        // 40-digit reference for k = 8.
        assert!(rel(rep.maxima[7], 0.055_295_798_748_041_36) < 1e-10);
        assert!(rel(rep.maxima[0], 0.478_415_484_204_676_7) < 1e-10);
        assert!(rep.pass);
    }

    #[test]
    fn homogeneity_oscillating_custom_fails() {
        // x^{1/2} (2 + sin ln x) is increasing but its ratio never settles.
        let df = DimensionFunction::custom(0.5, |x: f64| x.sqrt() * (2.0 + x.ln().sin())).unwrap();
        let xs: Vec<f64> = (1..=40).map(|k| 10f64.powf(-0.25 * k as f64)).collect();
        let rep = verify_homogeneity(&df, &[0.25, 0.5, 2.0, 4.0], &xs, 0.05).unwrap();
        assert!(!rep.pass);
        let tail_min = rep.maxima[20..].iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(tail_min > 0.1);
    }

    #[test]
    fn tail_ratio_pure_power() {
        let half = DimensionFunction::pure_power(0.5).unwrap();
        assert!((tail_ratio(&half, 100.0).unwrap() - 1.0).abs() < 1e-12);
        let two = DimensionFunction::pure_power(2.0).unwrap();
        let x = 1e4f64;
        let closed = (2.0 * x.sqrt() - 2.0) / x.sqrt();
        assert!((tail_ratio(&two, x).unwrap() - closed).abs() < 1e-11);
    }

    #[test]
    fn tail_ratio_limits_improve() {
        for d in [0.25, 0.5, 0.75, 1.5, 2.0, 3.0] {
            let df = DimensionFunction::pure_power(d).unwrap();
            let limit = if d < 1.0 { d / (1.0 - d) } else { d / (d - 1.0) };
            let errs: Vec<f64> =
                [1e2, 1e3, 1e4].iter().map(|&x| (tail_ratio(&df, x).unwrap() - limit).abs()).collect();
            // Exact for d < 1 (pure power tail integral is homogeneous).
            if d < 1.0 {
                assert!(errs.iter().all(|&e| e < 1e-9), "d={d} {errs:?}");
            } else {
                assert!(errs[0] > errs[1] && errs[1] > errs[2], "d={d} {errs:?}");
            }
        }
    }

    #[test]
    fn tail_ratio_power_log() {
        // 30-digit adaptive-quadrature references; the log correction makes
        // the approach to d/(1-d) = 1 slow (roughly 1 + 2/ln x).
        let df = DimensionFunction::power_log(0.5, 1.0).unwrap();
        let cases = [(1e4, 1.301_833_425_225_073_6), (1e6, 1.186_086_775_290_270_4), (1e8, 1.133_171_163_290_659)];
        for (x, want) in cases {
            let got = tail_ratio(&df, x).unwrap();
            assert!(rel(got, want) < 1e-8, "x={x} got {got}");
        }
    }

    #[test]
    fn tail_ratio_needs_large_x() {
        let df = DimensionFunction::pure_power(0.5).unwrap();
        assert!(tail_ratio(&df, 2.0).is_err());
    }

    #[test]
    fn parse_and_display() {
        let df: DimensionFunction = "power:d=0.5".parse().unwrap();
        assert_eq!(df, DimensionFunction::pure_power(0.5).unwrap());
        let df: DimensionFunction = "powerlog:d=0.5,a=1".parse().unwrap();
        assert_eq!(df.to_string(), "powerlog:d=0.5,a=1");
        let df: DimensionFunction = "powerloglog:d=0.5,a=2".parse().unwrap();
        assert_eq!(df.family(), Family::PowerLogLog);
        assert!("power:d=1".parse::<DimensionFunction>().is_err());
        assert!("cantor:d=0.5".parse::<DimensionFunction>().is_err());
        assert!("power".parse::<DimensionFunction>().is_err());
        assert!("power:d=x".parse::<DimensionFunction>().is_err());
    }
}
