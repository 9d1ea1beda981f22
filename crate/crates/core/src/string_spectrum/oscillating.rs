use serde::Serialize;

use super::counting::frequency;
use crate::error::{domain, Error, Result};
use crate::numeric::guarded_floor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatingCount {
    pub exact: u64,
    /// `m·N(λ) / λ^{d/p}` with `d = ln m / ln n`.
    pub s_value: f64,
}

/// Count for the self-similar string with `m^k` intervals of length
/// `n^{1−k}` at level `k >= 1`:
/// `N(λ) = Σ_k m^k ⌊λ^{1/p} / (π_p n^{k−1})⌋`.
pub fn oscillating_count(m: u64, n: u64, p: f64, lambda: f64) -> Result<OscillatingCount> {
    if n < 2 {
        return domain(format!("n must be >= 2, got {n}"));
    }
    if m <= n {
        return domain(format!("need m > n for an infinite-measure string, got m = {m}, n = {n}"));
    }
    let x = frequency(p, lambda)?;
    let mut total: u128 = 0;
    let mut level_len = 1.0f64;
    let mut mult: u128 = 1;
    loop {
        let fl = guarded_floor(x * level_len);
        if fl == 0 {
            break;
        }
        mult = mult.checked_mul(m as u128).ok_or(Error::Overflow)?;
        let term = mult.checked_mul(fl as u128).ok_or(Error::Overflow)?;
        total = total.checked_add(term).ok_or(Error::Overflow)?;
        level_len /= n as f64;
    }
    let exact = u64::try_from(total).map_err(|_| Error::Overflow)?;
    let d = (m as f64).ln() / (n as f64).ln();
    let s_value = if lambda > 0.0 { exact as f64 * m as f64 / lambda.powf(d / p) } else { 0.0 };
    Ok(OscillatingCount { exact, s_value })
}
