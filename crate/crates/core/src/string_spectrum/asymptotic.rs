use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::counting::{cutoff, frequency, Algorithm, CountBreakdown};
use super::fractal_string::{FractalString, TailLaw, TailMode};
use super::pi_p::pi_p;
use crate::dimension::Regime;
use crate::error::{domain, Error, Result};
use crate::summation::zeta_extended;

const ZETA_TOL: f64 = 1e-11;

/// `ζ(d)`, memoized per `d`.
pub fn zeta_cached(d: f64) -> Result<f64> {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = cache.lock().expect("zeta cache").get(&d.to_bits()) {
        return Ok(v);
    }
    let v = zeta_extended(d, ZETA_TOL)?;
    cache.lock().expect("zeta cache").insert(d.to_bits(), v);
    Ok(v)
}

/// `f_L(x) = f(L x)`: the boundary scale for lengths `L·g(j)`.
fn f_scaled(law: &TailLaw, x: f64) -> Result<f64> {
    law.df.eval_f(law.scale * x)
}

struct Terms {
    weyl: Option<f64>,
    boundary: Option<f64>,
    bracket: Option<(f64, f64)>,
}

fn leading_terms(s: &FractalString, x: f64) -> Result<Terms> {
    let law = s
        .tail()
        .ok_or_else(|| Error::RegimeError("asymptotics need a tail law".into()))?;
    let d = law.df.d();
    match (law.df.regime(), law.mode) {
        (Regime::Integrable, TailMode::TwoSided { .. }) => Err(Error::RegimeError(
            "no asymptotic statement for a two-sided tail with d < 1".into(),
        )),
        (Regime::Integrable, _) => Ok(Terms {
            weyl: Some(s.measure() * x),
            boundary: Some(zeta_cached(d)? * f_scaled(law, x)?),
            bracket: None,
        }),
        (Regime::NonIntegrable, TailMode::TwoSided { lower, upper }) => {
            let j1 = law.df.eval_f(lower * x)?;
            let j2 = law.df.eval_f(upper * x)?;
            Ok(Terms {
                weyl: None,
                boundary: None,
                bracket: Some((j1 / (d - 1.0), d * j2 / (d - 1.0))),
            })
        }
        (Regime::NonIntegrable, _) => Ok(Terms {
            weyl: None,
            boundary: Some(zeta_cached(d)? * f_scaled(law, x)?),
            bracket: None,
        }),
    }
}

/// Fills the asymptotic fields of an exact count where the regime allows.
pub(crate) fn attach_asymptotics(s: &FractalString, x: f64, out: &mut CountBreakdown) {
    if x <= 0.0 {
        return;
    }
    if let Ok(t) = leading_terms(s, x) {
        out.weyl_term = t.weyl;
        out.boundary_term = t.boundary;
        out.bracket = t.bracket;
        if let (Some(n), Some(b)) = (out.exact, t.boundary) {
            out.residual = Some(n as f64 - t.weyl.unwrap_or(0.0) - b);
        }
    }
}

/// Leading asymptotics of `N(λ)`: Weyl plus boundary term for `d < 1`,
/// boundary term alone for `d > 1`, and an `O(f)` bracket for two-sided tails.
pub fn asymptotic_count(s: &FractalString, p: f64, lambda: f64) -> Result<CountBreakdown> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveInput(lambda));
    }
    let x = frequency(p, lambda)?;
    let t = leading_terms(s, x)?;
    let mut evals = 0;
    Ok(CountBreakdown {
        lambda,
        p,
        exact: None,
        weyl_term: t.weyl,
        boundary_term: t.boundary,
        residual: None,
        cutoff_j: cutoff(s, x, &mut evals)?,
        algorithm: Algorithm::AsymptoticOnly,
        bracket: t.bracket,
        terms_evaluated: evals,
    })
}

/// Predicted `k`-th eigenvalue for an infinite-measure string,
/// `λ_k ≈ [L·g(k/ζ(d)) / π_p]^{−p}`, the exact inverse of the boundary term.
pub fn eigenvalue_growth(s: &FractalString, p: f64, k: u64) -> Result<f64> {
    let law = s
        .tail()
        .ok_or_else(|| Error::RegimeError("eigenvalue growth needs a tail law".into()))?;
    if law.df.regime() != Regime::NonIntegrable {
        return Err(Error::RegimeError("eigenvalue growth is stated for d > 1 only".into()));
    }
    if matches!(law.mode, TailMode::TwoSided { .. }) {
        return Err(Error::RegimeError("eigenvalue growth needs an exact or asymptotic tail".into()));
    }
    if k == 0 {
        return domain("eigenvalue rank starts at 1");
    }
    let pp = pi_p(p)?;
    let z = zeta_cached(law.df.d())?;
    let g = law.df.eval_g(k as f64 / z)?;
    Ok((law.scale * g / pp).powf(-p))
}
