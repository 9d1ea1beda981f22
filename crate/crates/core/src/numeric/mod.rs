//! Low-level numerical kernels shared by the spectral modules.

pub mod kahan;
pub mod quadrature;

pub use kahan::KahanSum;
pub use quadrature::{gauss_kronrod, tanh_sinh, QuadResult};

/// Relative width of the band below an integer that still floors up.
pub const FLOOR_GUARD: f64 = 1e-13;

/// `floor(y)` for a nonnegative float, except that values lying within
/// `FLOOR_GUARD * y` below an integer are rounded up to that integer.
///
/// Products like `l_j * x` frequently land on integers in exact
/// arithmetic, and binary64 rounding must not drop those lattice points.
#[inline(always)]
pub fn guarded_floor(y: f64) -> u64 {
    if !(0.0..4.0e18).contains(&y) {
        if !(y >= 0.0) {
            return 0;
        }
        let fl = y.floor();
        let fl_int = fl as u64;
        return if fl + 1.0 - y <= FLOOR_GUARD * y { fl_int.saturating_add(1) } else { fl_int };
    }
    // SAFETY: 0 <= y < 4e18 fits in i64, and truncation is floor for y >= 0.
    let fl = unsafe { y.to_int_unchecked::<i64>() };
    let up = fl + 1;
    (if up as f64 - y <= FLOOR_GUARD * y { up } else { fl }) as u64
}

/// Largest `j >= lo` with `pred(j)`, given `pred(lo)` holds, `pred` is
/// monotone (true then false) and `guess` is an estimate of the answer.
///
/// Searches by galloping away from the guess, then bisecting. `evals` is
/// incremented once per predicate evaluation.
pub fn last_true<P>(lo: u64, guess: u64, limit: u64, evals: &mut u64, mut pred: P) -> u64
where
    P: FnMut(u64) -> bool,
{
    let mut check = |j: u64, evals: &mut u64| {
        *evals += 1;
        pred(j)
    };
    let guess = guess.clamp(lo, limit);
    // Invariant below: check(good) is true, check(bad) is false (or bad = limit + 1).
    let (mut good, mut bad);
    if check(guess, evals) {
        good = guess;
        let mut step = 1u64;
        loop {
            if good >= limit {
                return limit;
            }
            let probe = good.saturating_add(step).min(limit);
            if check(probe, evals) {
                good = probe;
                step = step.saturating_mul(2);
            } else {
                bad = probe;
                break;
            }
        }
    } else {
        bad = guess;
        let mut step = 1u64;
        loop {
            let probe = bad.saturating_sub(step).max(lo);
            if probe == lo || check(probe, evals) {
                good = probe;
                break;
            }
            bad = probe;
            step = step.saturating_mul(2);
        }
    }
    while bad - good > 1 {
        let mid = good + (bad - good) / 2;
        if check(mid, evals) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}
