use crate::dimension::{DimensionFunction, Family, Regime};
use crate::error::{domain, Error, Result};
use crate::numeric::{guarded_floor, KahanSum};
use crate::summation::{tail_sum, zeta_extended};

/// How closely the tail lengths follow `L·g(j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailMode {
    /// `l_j = L·g(j)`
    Exact,
    /// `l_j ~ L·g(j)`
    Asymptotic,
    /// `lower·g(j) <= l_j <= upper·g(j)`
    TwoSided { lower: f64, upper: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailLaw {
    pub df: DimensionFunction,
    pub mode: TailMode,
    pub scale: f64,
    /// Argument of `g` for the first tail interval.
    pub start: u64,
}

impl TailLaw {
    pub fn exact(df: DimensionFunction, scale: f64) -> Self {
        Self { df, mode: TailMode::Exact, scale, start: 1 }
    }
}

/// Evaluates `g(t)` for pure powers without going through `powf` where a
/// cheaper exact-enough form exists. The counting loops are dominated by this.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LengthKernel {
    IntPow(i32),
    InvSqrt,
    InvCbrt,
    Pow(f64),
    Inverted,
}

impl LengthKernel {
    fn for_function(df: &DimensionFunction) -> Self {
        if df.family() != Family::PurePower {
            return LengthKernel::Inverted;
        }
        let d = df.d();
        let inv = 1.0 / d;
        if d == 2.0 {
            LengthKernel::InvSqrt
        } else if d == 3.0 {
            LengthKernel::InvCbrt
        } else if inv.fract() == 0.0 && inv <= 16.0 && (1.0 / inv) == d {
            LengthKernel::IntPow(inv as i32)
        } else {
            LengthKernel::Pow(-inv)
        }
    }
}

/// `t^{-1/3}` by bit-level seeding and Newton steps; within a few ulp of
/// `1 / t.cbrt()` and several times faster.
#[inline(always)]
pub(crate) fn inv_cbrt(t: f64) -> f64 {
    // Seed within 3.5% of the root; four Newton steps reach ~2 ulp.
    let seed = 0x553e_f0fe_eb57_fc00u64.wrapping_sub(t.to_bits() / 3);
    let mut y = f64::from_bits(seed);
    for _ in 0..4 {
        y = y * (4.0 - t * y * y * y) * (1.0 / 3.0);
    }
    y
}

const CBRT_BLOCK: f64 = 256.0;
const CBRT_BLOCKED_FROM: f64 = 4096.0;

/// Block start `a <= t` with `a^{-1/3}` and `1/(3a)`.
#[inline(always)]
fn cbrt_block(t: f64) -> (f64, f64, f64) {
    let a = ((t * (1.0 / CBRT_BLOCK)) as i64) as f64 * CBRT_BLOCK;
    (a, inv_cbrt(a), 1.0 / (3.0 * a))
}

/// `t^{-1/3}` from the linearization at the block start; only float
/// arithmetic, so runs of consecutive `t` vectorize.
#[inline(always)]
fn inv_cbrt_seeded(t: f64, a: f64, ya: f64, inv3a: f64) -> f64 {
    let mut y = ya * (1.0 - (t - a) * inv3a);
    for _ in 0..3 {
        y = y * (4.0 - t * y * y * y) * (1.0 / 3.0);
    }
    y
}

/// The cube-root length kernel. Every caller goes through this so that
/// blocked and single evaluations agree bit for bit.
#[inline(always)]
pub(crate) fn inv_cbrt_kernel(t: f64) -> f64 {
    if t < CBRT_BLOCKED_FROM {
        return inv_cbrt(t);
    }
    let (a, ya, inv3a) = cbrt_block(t);
    inv_cbrt_seeded(t, a, ya, inv3a)
}

/// `Σ ⌊scale · t^{-1/3}⌋` over `t = t0, t0 + 1, …, t0 + n − 1`.
fn cbrt_floor_sum(scale: f64, t0: f64, n: u64) -> u128 {
    let mut acc: u128 = 0;
    let mut done = 0u64;
    let mut buf = [0.0f64; CBRT_BLOCK as usize];
    while done < n {
        let t = t0 + done as f64;
        if t < CBRT_BLOCKED_FROM {
            acc += guarded_floor(scale * inv_cbrt(t)) as u128;
            done += 1;
            continue;
        }
        let (a, ya, inv3a) = cbrt_block(t);
        let len = ((a + CBRT_BLOCK - t) as u64).min(n - done) as usize;
        for (i, slot) in buf[..len].iter_mut().enumerate() {
            *slot = scale * inv_cbrt_seeded(t + (i as i32) as f64, a, ya, inv3a);
        }
        let mut part = 0u64;
        for &y in &buf[..len] {
            part += guarded_floor(y);
        }
        acc += part as u128;
        done += len as u64;
    }
    acc
}

/// A fractal string: a finite prefix of interval lengths followed by an
/// optional tail `l_j ≈ L·g(j)`. Interval positions are irrelevant to
/// everything computed here, so only lengths are stored.
#[derive(Debug, Clone)]
pub struct FractalString {
    prefix: Vec<f64>,
    tail: Option<TailLaw>,
    measure: f64,
    kernel: LengthKernel,
}

impl FractalString {
    pub fn new(prefix: Vec<f64>, tail: Option<TailLaw>) -> Result<Self> {
        if prefix.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return domain("interval lengths must be positive and finite");
        }
        if prefix.windows(2).any(|w| w[1] > w[0]) {
            return domain("prefix lengths must be nonincreasing");
        }
        let mut kernel = LengthKernel::Inverted;
        if let Some(t) = &tail {
            if !(t.scale > 0.0 && t.scale.is_finite()) {
                return domain(format!("tail scale must be positive, got {}", t.scale));
            }
            if t.start == 0 {
                return domain("tail start index must be >= 1");
            }
            if let TailMode::TwoSided { lower, upper } = t.mode {
                if !(lower > 0.0 && lower <= t.scale && t.scale <= upper && upper.is_finite()) {
                    return domain("two-sided tail needs 0 < lower <= scale <= upper");
                }
            }
            kernel = LengthKernel::for_function(&t.df);
        }
        let mut s = Self { prefix, tail, measure: 0.0, kernel };
        if let (Some(t), Some(&last)) = (&s.tail, s.prefix.last()) {
            let first = s.tail_length_at(t.start as f64)?;
            if t.mode == TailMode::Exact && first > last * (1.0 + 1e-12) {
                return domain(format!(
                    "tail starts at length {first} above the last prefix length {last}"
                ));
            }
        }
        s.measure = s.compute_measure()?;
        Ok(s)
    }

    /// Finitely many intervals.
    pub fn finite(lengths: Vec<f64>) -> Result<Self> {
        let mut lengths = lengths;
        lengths.sort_by(|a, b| b.total_cmp(a));
        Self::new(lengths, None)
    }

    /// `l_j = L·g(j)` for all `j >= 1`.
    pub fn from_law(df: DimensionFunction, scale: f64) -> Result<Self> {
        Self::new(Vec::new(), Some(TailLaw::exact(df, scale)))
    }

    /// `l_j = L·j^{−1/d}` for all `j >= 1`.
    pub fn power_law(d: f64, scale: f64) -> Result<Self> {
        Self::from_law(DimensionFunction::pure_power(d)?, scale)
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    pub fn tail(&self) -> Option<&TailLaw> {
        self.tail.as_ref()
    }

    /// `Σ l_j`, or `+∞` for a non-integrable tail.
    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn has_exact_lengths(&self) -> bool {
        self.tail.as_ref().is_none_or(|t| t.mode == TailMode::Exact)
    }

    pub(crate) fn tail_offset(&self) -> Option<(u64, u64)> {
        self.tail.as_ref().map(|t| (self.prefix.len() as u64, t.start))
    }

    fn compute_measure(&self) -> Result<f64> {
        let head = KahanSum::sum_iter(self.prefix.iter().copied());
        let Some(t) = &self.tail else { return Ok(head) };
        if t.df.regime() == Regime::NonIntegrable {
            return Ok(f64::INFINITY);
        }
        let tail = if t.df.family() == Family::PurePower {
            let s = 1.0 / t.df.d();
            let mut acc = KahanSum::new();
            acc.add(zeta_extended(s, 1e-13)?);
            for j in 1..t.start {
                acc.add(-(j as f64).powf(-s));
            }
            acc.value()
        } else {
            let df = &t.df;
            tail_sum(|u| df.eval_g(u).unwrap_or(f64::NAN), t.start, 1e-12)?
        };
        Ok(head + t.scale * tail)
    }

    /// `g(t)` through the length kernel.
    #[inline(always)]
    fn kernel_g(&self, law: &TailLaw, t: f64) -> Result<f64> {
        Ok(match self.kernel {
            LengthKernel::IntPow(n) => t.powi(-n),
            LengthKernel::InvSqrt => 1.0 / t.sqrt(),
            LengthKernel::InvCbrt => inv_cbrt_kernel(t),
            LengthKernel::Pow(e) => t.powf(e),
            LengthKernel::Inverted => law.df.eval_g(t)?,
        })
    }

    /// `L·g(t)` at a real tail argument.
    pub(crate) fn tail_length_at(&self, t: f64) -> Result<f64> {
        let law = self.tail.as_ref().ok_or(Error::DomainError("string has no tail".into()))?;
        Ok(law.scale * self.kernel_g(law, t)?)
    }

    /// Length of the `j`-th interval (1-based); zero past a finite string.
    pub fn length(&self, j: u64) -> Result<f64> {
        if j == 0 {
            return domain("interval index starts at 1");
        }
        let m = self.prefix.len() as u64;
        if j <= m {
            return Ok(self.prefix[(j - 1) as usize]);
        }
        match &self.tail {
            Some(t) => self.tail_length_at((j - m - 1 + t.start) as f64),
            None => Ok(0.0),
        }
    }

    /// `⌊x·l_j⌋` with the guard band. Tail terms are formed as `(x·L)·g(t)`;
    /// every counter goes through this (or [`Self::floor_sum_tail`], which
    /// uses the same product) so their integer results agree exactly.
    pub(crate) fn floor_at(&self, x: f64, j: u64) -> Result<u64> {
        let m = self.prefix.len() as u64;
        if j <= m {
            return Ok(guarded_floor(x * self.prefix[(j - 1) as usize]));
        }
        match &self.tail {
            Some(law) => {
                let t = (j - m - 1 + law.start) as f64;
                Ok(guarded_floor((x * law.scale) * self.kernel_g(law, t)?))
            }
            None => Ok(0),
        }
    }

    /// Real global index `j` at which the tail length equals `y`.
    pub(crate) fn index_for_length(&self, y: f64) -> Option<f64> {
        let t = self.tail.as_ref()?;
        let arg = t.df.eval_g_inverse(y / t.scale).ok()?;
        Some(arg - t.start as f64 + self.prefix.len() as f64 + 1.0)
    }

    /// `Σ_{j=lo}^{hi} ⌊x·l_j⌋` over tail indices only (`lo > prefix.len()`).
    pub(crate) fn floor_sum_tail(&self, x: f64, lo: u64, hi: u64) -> Result<u128> {
        let law = self.tail.as_ref().expect("tail present");
        let shift = law.start as f64 - self.prefix.len() as f64 - 1.0;
        let scale = x * law.scale;
        macro_rules! run {
            ($kernel:expr) => {{
                let k = $kernel;
                let first = guarded_floor(scale * k(lo as f64 + shift));
                if (first as u128) * ((hi - lo + 1) as u128) < (u64::MAX as u128) {
                    let mut acc: u64 = 0;
                    let mut t = lo as f64 + shift;
                    for _ in lo..=hi {
                        acc += guarded_floor(scale * k(t));
                        t += 1.0;
                    }
                    Ok(acc as u128)
                } else {
                    let mut wide: u128 = 0;
                    for j in lo..=hi {
                        wide += guarded_floor(scale * k(j as f64 + shift)) as u128;
                    }
                    Ok(wide)
                }
            }};
        }
        match self.kernel {
            LengthKernel::IntPow(n) => run!(|t: f64| t.powi(-n)),
            LengthKernel::InvSqrt => run!(|t: f64| 1.0 / t.sqrt()),
            LengthKernel::InvCbrt => Ok(cbrt_floor_sum(scale, lo as f64 + shift, hi - lo + 1)),
            LengthKernel::Pow(e) => run!(|t: f64| t.powf(e)),
            LengthKernel::Inverted => {
                let mut acc: u128 = 0;
                for j in lo..=hi {
                    acc += guarded_floor(scale * law.df.eval_g(j as f64 + shift)?) as u128;
                }
                Ok(acc)
            }
        }
    }
}
