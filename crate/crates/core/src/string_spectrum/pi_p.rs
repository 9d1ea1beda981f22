use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{domain, Result};
use crate::numeric::tanh_sinh;

fn cache() -> &'static Mutex<HashMap<u64, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("p must satisfy 1 < p < ∞, got {p}"));
    }
    Ok(())
}

/// `π_p = 2 (p−1)^{1/p} ∫_0^1 (1 − s^p)^{−1/p} ds`, the constant in the
/// closed-form Dirichlet spectrum of the one-dimensional p-Laplacian.
///
/// Evaluated by tanh-sinh quadrature with `1 − s^p` formed from the exact
/// distance to `s = 1`; memoized per `p`. `π_2` is returned as `π` itself.
pub fn pi_p(p: f64) -> Result<f64> {
    check_p(p)?;
    if p == 2.0 {
        return Ok(std::f64::consts::PI);
    }
    if let Some(&v) = cache().lock().expect("pi_p cache").get(&p.to_bits()) {
        return Ok(v);
    }
    let r = tanh_sinh(
        |s, _, to_one| {
            let gap = if to_one < 0.5 {
                -(p * (-to_one).ln_1p()).exp_m1()
            } else {
                1.0 - s.powf(p)
            };
            gap.powf(-1.0 / p)
        },
        0.0,
        1.0,
        1e-14,
    )?;
    let v = 2.0 * (p - 1.0).powf(1.0 / p) * r.value;
    cache().lock().expect("pi_p cache").insert(p.to_bits(), v);
    Ok(v)
}

/// `k`-th Dirichlet eigenvalue `π_p^p k^p / T^p` of the p-Laplacian on an interval of length `T`.
pub fn interval_eigenvalue(length: f64, p: f64, k: u64) -> Result<f64> {
    if !(length > 0.0 && length.is_finite()) {
        return domain(format!("interval length must be positive, got {length}"));
    }
    if k == 0 {
        return domain("eigenvalue index starts at 1");
    }
    let pp = pi_p(p)?;
    Ok((pp * k as f64 / length).powf(p))
}
