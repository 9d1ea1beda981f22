use rayon::prelude::*;
use serde::Serialize;

use super::asymptotic::attach_asymptotics;
use super::fractal_string::FractalString;
use super::pi_p::pi_p;
use crate::error::{domain, Error, Result};
use crate::numeric::last_true;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Naive,
    Hyperbola,
    #[serde(rename = "asymptotic")]
    AsymptoticOnly,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Algorithm::Naive),
            "hyperbola" => Ok(Algorithm::Hyperbola),
            "asymptotic" => Ok(Algorithm::AsymptoticOnly),
            _ => domain(format!("unknown algorithm '{s}'")),
        }
    }
}

/// Eigenvalue count at one `λ` together with its asymptotic decomposition.
///
/// `residual` is `exact − weyl − boundary`, with an absent Weyl term
/// (infinite measure) read as zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountBreakdown {
    pub lambda: f64,
    pub p: f64,
    pub exact: Option<u64>,
    #[serde(rename = "weyl")]
    pub weyl_term: Option<f64>,
    #[serde(rename = "boundary")]
    pub boundary_term: Option<f64>,
    pub residual: Option<f64>,
    pub cutoff_j: u64,
    pub algorithm: Algorithm,
    /// Two-sided bound on the count for tails known only up to constants.
    pub bracket: Option<(f64, f64)>,
    /// Number of floor terms (and search probes) evaluated.
    pub terms_evaluated: u64,
}

/// Largest index whose `j^{-1/d}`-type arguments are still exact in binary64.
const INDEX_LIMIT: u64 = 1 << 52;
const CHUNK: u64 = 1 << 16;
/// Beyond this, `x·l_j` no longer resolves integers.
const EXACT_FLOOR_LIMIT: f64 = 9_007_199_254_740_992.0;

/// `λ^{1/p} / π_p`.
pub(crate) fn frequency(p: f64, lambda: f64) -> Result<f64> {
    let pp = pi_p(p)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return domain(format!("lambda must be finite and >= 0, got {lambda}"));
    }
    Ok(lambda.powf(1.0 / p) / pp)
}

/// Largest `j` with `⌊x·l_j⌋ >= 1`, or 0.
pub(crate) fn cutoff(s: &FractalString, x: f64, evals: &mut u64) -> Result<u64> {
    let m = s.prefix().len() as u64;
    let mut err = None;
    let mut pred = |j: u64| match s.floor_at(x, j) {
        Ok(v) => v >= 1,
        Err(e) => {
            err.get_or_insert(e);
            false
        }
    };
    *evals += 1;
    if x * s.length(1)? > EXACT_FLOOR_LIMIT {
        return Err(Error::Budget(format!("largest term x·l_1 exceeds 2^53 at x = {x}")));
    }
    if x <= 0.0 || !pred(1) {
        return Ok(0);
    }
    let tail_live = s.tail().is_some() && {
        *evals += 1;
        pred(m + 1)
    };
    let j = if !tail_live {
        last_true(1, m / 2, m.max(1), evals, &mut pred)
    } else {
        let guess = s.index_for_length(1.0 / x).unwrap_or((m + 1) as f64);
        let guess = if guess.is_finite() { guess.max(1.0).min(INDEX_LIMIT as f64) as u64 } else { m + 1 };
        last_true(m + 1, guess, INDEX_LIMIT, evals, &mut pred)
    };
    if let Some(e) = err {
        return Err(e);
    }
    if j >= INDEX_LIMIT {
        return Err(Error::Budget(format!("cutoff exceeds 2^52 intervals at x = {x}")));
    }
    Ok(j)
}

fn require_exact(s: &FractalString) -> Result<()> {
    if s.has_exact_lengths() {
        Ok(())
    } else {
        Err(Error::InexactTail)
    }
}

fn narrow(v: u128) -> Result<u64> {
    u64::try_from(v).map_err(|_| Error::Overflow)
}

/// `Σ_{j=1}^{hi} ⌊x·l_j⌋`; the tail part runs in fixed chunks in parallel.
fn floor_sum(s: &FractalString, x: f64, hi: u64) -> Result<u128> {
    let m = s.prefix().len() as u64;
    let mut total: u128 = 0;
    for j in 1..=hi.min(m) {
        total += s.floor_at(x, j)? as u128;
    }
    if hi <= m {
        return Ok(total);
    }
    let first = m + 1;
    let chunks = (hi - first) / CHUNK + 1;
    let tail = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = first + c * CHUNK;
            let top = (lo + CHUNK - 1).min(hi);
            s.floor_sum_tail(x, lo, top)
        })
        .try_reduce(|| 0, |a, b| a.checked_add(b).ok_or(Error::Overflow))?;
    total = total.checked_add(tail).ok_or(Error::Overflow)?;
    Ok(total)
}

/// `N(λ) = Σ_j ⌊l_j λ^{1/p} / π_p⌋`, term by term up to the cutoff.
pub fn count_naive(s: &FractalString, p: f64, lambda: f64) -> Result<CountBreakdown> {
    require_exact(s)?;
    let x = frequency(p, lambda)?;
    let mut evals = 0;
    let j = cutoff(s, x, &mut evals)?;
    let exact = narrow(floor_sum(s, x, j)?)?;
    let mut out = CountBreakdown {
        lambda,
        p,
        exact: Some(exact),
        weyl_term: None,
        boundary_term: None,
        residual: None,
        cutoff_j: j,
        algorithm: Algorithm::Naive,
        bracket: None,
        terms_evaluated: evals + j,
    };
    attach_asymptotics(s, x, &mut out);
    Ok(out)
}

/// Real root of `x·l(j) = j` on the tail, by bisection.
fn diagonal_crossing(s: &FractalString, x: f64, lo: f64, hi: f64) -> Result<f64> {
    let phi = |j: f64| -> Result<f64> {
        let (m, start) = s.tail_offset().expect("tail present");
        Ok(x * s.tail_length_at(j - m as f64 - 1.0 + start as f64)? - j)
    };
    let (mut a, mut b) = (lo, hi);
    if !(phi(a)? > 0.0 && phi(b)? <= 0.0) {
        return Err(Error::InverseFailure(format!("no sign change on [{lo}, {hi}]")));
    }
    while b - a > 1e-9 * b.max(1.0) {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if phi(mid)? > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(a)
}

/// Same count as [`count_naive`], obtained by counting lattice points under
/// the curve `k = x·l(j)` up to its crossing with the diagonal and under the
/// inverse curve beyond it, then removing the doubly counted rectangle.
///
/// Works with `O(K log J)` floor evaluations, `K` being the crossing point.
pub fn count_hyperbola(s: &FractalString, p: f64, lambda: f64) -> Result<CountBreakdown> {
    require_exact(s)?;
    let x = frequency(p, lambda)?;
    let mut evals = 0;
    let j_max = cutoff(s, x, &mut evals)?;
    let m = s.prefix().len() as u64;

    let (exact, evaluated) = if s.tail().is_none() || j_max <= m + 1 {
        (narrow(floor_sum(s, x, j_max)?)?, j_max)
    } else {
        let k_real = diagonal_crossing(s, x, (m + 1) as f64, (j_max + 1) as f64).or_else(|e| {
            if x * s.length(m + 1)? <= (m + 1) as f64 {
                Ok((m + 1) as f64 - 0.5)
            } else {
                Err(e)
            }
        })?;
        let a = (k_real.floor() as u64).max(m).min(j_max);
        let b = if a < j_max { s.floor_at(x, a + 1)? } else { 0 };
        let head = floor_sum(s, x, a)?;

        let mut columns: u128 = 0;
        let mut limit = j_max;
        let mut err = None;
        for k in 1..=b {
            let guess = s
                .index_for_length(k as f64 / x)
                .filter(|g| g.is_finite())
                .map_or(a + 1, |g| g.max(1.0).min(limit as f64) as u64);
            let c = last_true(a + 1, guess, limit, &mut evals, |j| match s.floor_at(x, j) {
                Ok(v) => v >= k,
                Err(e) => {
                    err.get_or_insert(e);
                    false
                }
            });
            if let Some(e) = err.take() {
                return Err(e);
            }
            columns += c as u128;
            limit = c;
        }
        let total = (head + columns)
            .checked_sub(a as u128 * b as u128)
            .ok_or_else(|| Error::InverseFailure("negative inclusion-exclusion total".into()))?;
        (narrow(total)?, a)
    };

    let mut out = CountBreakdown {
        lambda,
        p,
        exact: Some(exact),
        weyl_term: None,
        boundary_term: None,
        residual: None,
        cutoff_j: j_max,
        algorithm: Algorithm::Hyperbola,
        bracket: None,
        terms_evaluated: evals + evaluated,
    };
    attach_asymptotics(s, x, &mut out);
    Ok(out)
}

/// Exact count with the requested algorithm.
pub fn count_with(s: &FractalString, p: f64, lambda: f64, algo: Algorithm) -> Result<CountBreakdown> {
    match algo {
        Algorithm::Naive => count_naive(s, p, lambda),
        Algorithm::Hyperbola => count_hyperbola(s, p, lambda),
        Algorithm::AsymptoticOnly => super::asymptotic_count(s, p, lambda),
    }
}

/// The `k`-th eigenvalue: the smallest `λ` with `N(λ) >= k`, located by
/// bisection on `λ^{1/p}` to relative precision `1e-14`.
pub fn eigenvalue_by_rank(s: &FractalString, p: f64, k: u64, algo: Algorithm) -> Result<f64> {
    if k == 0 {
        return domain("eigenvalue rank starts at 1");
    }
    if algo == Algorithm::AsymptoticOnly {
        return domain("rank inversion needs an exact counter");
    }
    let pp = pi_p(p)?;
    let count = |x: f64| -> Result<u64> {
        let lambda = (pp * x).powf(p);
        Ok(count_with(s, p, lambda, algo)?.exact.unwrap_or(0))
    };
    let l1 = s.length(1)?;
    if l1 <= 0.0 {
        return domain("string has no intervals");
    }
    let mut lo = 0.5 / l1;
    let mut hi = 1.0 / l1;
    while count(hi)? < k {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() || hi > 1e300 {
            return Err(Error::Budget(format!("rank {k} not reached")));
        }
    }
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count(mid)? >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((pp * hi).powf(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::DimensionFunction;
    use crate::string_spectrum::fractal_string::{TailLaw, TailMode};
    use std::f64::consts::PI;

    fn brute(lengths: impl Iterator<Item = f64>, x: f64) -> u64 {
        lengths.map(|l| (l * x + 1e-9).floor() as u64).sum()
    }

    #[test]
    fn single_interval_examples() {
        let s = FractalString::finite(vec![1.0]).unwrap();
        assert_eq!(count_naive(&s, 2.0, (3.5 * PI).powi(2)).unwrap().exact, Some(3));
        assert_eq!(count_naive(&s, 2.0, 0.5 * PI * PI).unwrap().exact, Some(0));
        assert_eq!(count_naive(&s, 2.0, 0.0).unwrap().exact, Some(0));
        assert_eq!(count_hyperbola(&s, 2.0, (3.5 * PI).powi(2)).unwrap().exact, Some(3));
    }

    #[test]
    fn inverse_square_lengths() {
        let s = FractalString::power_law(0.5, 1.0).unwrap();
        let lam = (10.0 * PI).powi(2);
        let n = count_naive(&s, 2.0, lam).unwrap();
        assert_eq!(n.exact, Some(13));
        assert_eq!(n.cutoff_j, 3);
        assert_eq!(count_hyperbola(&s, 2.0, lam).unwrap().exact, Some(13));
        for k in 1..=3 {
            let lam = (10f64.powi(k) * PI).powi(2);
            let x = 10f64.powi(k);
            let want = brute((1..=2000u64).map(|j| (j as f64).powi(-2)), x);
            assert_eq!(count_naive(&s, 2.0, lam).unwrap().exact, Some(want));
            assert_eq!(count_hyperbola(&s, 2.0, lam).unwrap().exact, Some(want));
        }
    }

    #[test]
    fn hyperbola_matches_naive_off_grid() {
        for d in [0.3, 0.5, 0.75, 1.5, 2.0, 2.5] {
            for p in [1.5, 2.0, 3.0] {
                let s = FractalString::power_law(d, 0.7).unwrap();
                for lam in [1.0, 37.2, 1234.5, 98765.4] {
                    let a = count_naive(&s, p, lam).unwrap();
                    let b = count_hyperbola(&s, p, lam).unwrap();
                    assert_eq!(a.exact, b.exact, "d={d} p={p} λ={lam}");
                    assert_eq!(a.cutoff_j, b.cutoff_j);
                }
            }
        }
    }

    #[test]
    fn hyperbola_with_prefix_and_log_tail() {
        let df = DimensionFunction::power_log(0.5, 1.0).unwrap();
        let tail = TailLaw { df, mode: TailMode::Exact, scale: 0.2, start: 4 };
        let s = FractalString::new(vec![1.0, 0.6, 0.6, 0.3], Some(tail)).unwrap();
        for lam in [10.0, 500.0, 2.0e4, 3.0e5] {
            let a = count_naive(&s, 2.0, lam).unwrap();
            let b = count_hyperbola(&s, 2.0, lam).unwrap();
            assert_eq!(a.exact, b.exact, "λ={lam}");
            let x = lam.sqrt() / PI;
            let want = brute((1..=a.cutoff_j + 10).map(|j| s.length(j).unwrap()), x);
            assert_eq!(a.exact, Some(want));
        }
    }

    #[test]
    fn inexact_tails_are_rejected() {
        let df = DimensionFunction::pure_power(2.0).unwrap();
        let tail = TailLaw { df, mode: TailMode::Asymptotic, scale: 1.0, start: 1 };
        let s = FractalString::new(vec![], Some(tail)).unwrap();
        assert_eq!(count_naive(&s, 2.0, 10.0), Err(Error::InexactTail));
        assert_eq!(count_hyperbola(&s, 2.0, 10.0), Err(Error::InexactTail));
    }

    #[test]
    fn monotone_in_lambda() {
        let s = FractalString::power_law(2.0, 1.0).unwrap();
        let mut prev = 0;
        for i in 0..200 {
            let lam = 1.1f64.powi(i);
            let n = count_hyperbola(&s, 2.0, lam).unwrap().exact.unwrap();
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn single_interval_scaling() {
        for t in [0.3, 1.7, 4.0] {
            let s = FractalString::finite(vec![t]).unwrap();
            let unit = FractalString::finite(vec![1.0]).unwrap();
            for lam in [3.0, 50.0, 1000.0] {
                for p in [1.5, 2.0, 3.0] {
                    let a = count_naive(&s, p, lam).unwrap().exact;
                    let b = count_naive(&unit, p, t.powf(p) * lam).unwrap().exact;
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn rank_inversion_hits_eigenvalues() {
        let s = FractalString::finite(vec![1.0, 0.5]).unwrap();
        // Spectrum: π²k² and 4π²k², merged: π², 4π², 4π², 9π², ...
        let l = eigenvalue_by_rank(&s, 2.0, 3, Algorithm::Naive).unwrap();
        assert!((l / (4.0 * PI * PI) - 1.0).abs() < 1e-12);
        let l = eigenvalue_by_rank(&s, 2.0, 4, Algorithm::Naive).unwrap();
        assert!((l / (9.0 * PI * PI) - 1.0).abs() < 1e-12);
    }
}
