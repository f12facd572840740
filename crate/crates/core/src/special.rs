//! Scalar special functions and exact combinatorics.
//!
//! Everything the bounds need reduces to a handful of primitives: the principal
//! branch of the Lambert W function, the standard normal upper tail and its
//! Mills-ratio sandwich, binary entropy, and binomial/multinomial coefficients.
//! The combinatorics come in two flavours that check each other: exact big-integer
//! arithmetic (used up to [`EXACT_CROSSOVER`]) and a log-factorial path for
//! larger block sizes.

use std::f64::consts::{LN_2, PI};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Result};

/// Block sizes up to this value use exact big-integer combinatorics.
pub const EXACT_CROSSOVER: u64 = 4096;

/// Largest block size accepted by the binomial routines.
pub const MAX_BINOMIAL_N: u64 = 100_000;

/// Neumaier-compensated accumulator.
///
/// Partial sums combined with [`KahanSum::merge`] agree to ~1e-15 relative
/// regardless of the order they were produced in.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &KahanSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Principal branch W₀ of the Lambert W function on `[0, ∞)`.
///
/// Halley iteration started from a short series near zero, `ln(1 + x)` on the
/// middle range and `ln x − ln ln x` above `e`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(domain("lambert_w0", format!("x = {x} is outside [0, inf)")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if x < 1e-3 {
        // W(x) = x - x^2 + 3/2 x^3 - 8/3 x^4 + 125/24 x^5; truncation < 1e-17 here
        return Ok(x * (1.0 - x * (1.0 - x * (1.5 - x * (8.0 / 3.0 - x * 125.0 / 24.0)))));
    }

    let mut w = if x > std::f64::consts::E {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    } else {
        x.ln_1p() * 0.8
    };

    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

/// Standard normal upper tail `Q(x) = ∫ₓ^∞ φ(t) dt`.
pub fn gaussian_upper_tail(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 40.0 {
        return 0.0;
    }
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Closed-form bracket around the two-sided Gaussian tail `2Q(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MillsSandwich {
    pub lower: f64,
    pub upper: f64,
    /// The raw lower expression was negative (x < 1) and has been set to zero.
    pub clamped: bool,
}

impl MillsSandwich {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Upper Mills bound `√(2/π) e^{−x²/2} / x`.
pub fn mills_upper(x: f64) -> f64 {
    (2.0 / PI).sqrt() * (-0.5 * x * x).exp() / x
}

pub fn mills_sandwich(x: f64) -> Result<MillsSandwich> {
    if x.is_nan() || x <= 0.0 {
        return Err(domain("mills_sandwich", format!("x = {x} must be > 0")));
    }
    let upper = mills_upper(x);
    let raw_lower = (2.0 / PI).sqrt() * (1.0 / x - 1.0 / (x * x * x)) * (-0.5 * x * x).exp();
    let clamped = raw_lower < 0.0 || x == 1.0;
    Ok(MillsSandwich {
        lower: raw_lower.max(0.0),
        upper,
        clamped,
    })
}

/// Binary entropy in bits on the open interval (0, 1).
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain(
            "binary_entropy",
            format!("x = {x} is outside (0, 1)"),
        ));
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Exact `C(n, k)` for `0 ≤ k ≤ n ≤ 100000`.
pub fn exact_binomial(n: u64, k: u64) -> Result<BigUint> {
    check_binomial_args("exact_binomial", n, k)?;
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

fn check_binomial_args(func: &'static str, n: u64, k: u64) -> Result<()> {
    if n > MAX_BINOMIAL_N {
        return Err(domain(func, format!("n = {n} exceeds {MAX_BINOMIAL_N}")));
    }
    if k > n {
        return Err(domain(func, format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

/// Exact binomial coefficients `C(n, k)` for consecutive `k`, advanced by the
/// row recurrence `C(n, k+1) = C(n, k)(n − k)/(k + 1)`.
#[derive(Debug, Clone)]
pub struct BinomialRow {
    n: u64,
    k: u64,
    end: u64,
    current: BigUint,
}

impl BinomialRow {
    /// Coefficients for `k` in `k_lo..=k_hi` (empty when `k_lo > k_hi`).
    pub fn new(n: u64, k_lo: u64, k_hi: u64) -> Result<Self> {
        check_binomial_args("BinomialRow::new", n, k_lo.min(n))?;
        let k_hi = k_hi.min(n);
        let current = if k_lo <= k_hi {
            exact_binomial(n, k_lo)?
        } else {
            BigUint::zero()
        };
        Ok(Self {
            n,
            k: k_lo,
            end: k_hi,
            current,
        })
    }
}

impl Iterator for BinomialRow {
    type Item = (u64, BigUint);

    fn next(&mut self) -> Option<Self::Item> {
        if self.k > self.end {
            return None;
        }
        let out = (self.k, self.current.clone());
        if self.k < self.n {
            self.current *= self.n - self.k;
            self.current /= self.k + 1;
        }
        self.k += 1;
        Some(out)
    }
}

/// `log₂` of a big integer, accurate to f64 precision. Zero maps to `-inf`.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return x.to_u64().map(|v| (v as f64).log2()).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).log2() + shift as f64
}

/// `ln n!`: exact products below 171, Stirling series above.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 171 {
        let mut acc = 1.0_f64;
        for i in 2..=n {
            acc *= i as f64;
        }
        return acc.ln();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + series
}

/// `log₂ C(n, k)`; exact below the crossover, log-factorial above.
pub fn log2_binomial(n: u64, k: u64) -> Result<f64> {
    check_binomial_args("log2_binomial", n, k)?;
    if n <= EXACT_CROSSOVER {
        Ok(log2_biguint(&exact_binomial(n, k)?))
    } else {
        Ok((ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)) / LN_2)
    }
}

fn check_counts(func: &'static str, n: u64, counts: &[u64]) -> Result<()> {
    let total: u64 = counts.iter().sum();
    if total != n {
        return Err(domain(func, format!("counts sum to {total}, expected {n}")));
    }
    Ok(())
}

/// `log₂` of the multinomial coefficient via exact big-integer products.
pub fn log2_multinomial_exact(n: u64, counts: &[u64]) -> Result<f64> {
    check_counts("log2_multinomial_exact", n, counts)?;
    let mut remaining = n;
    let mut acc = BigUint::one();
    for &k in counts {
        acc *= exact_binomial(remaining, k)?;
        remaining -= k;
    }
    Ok(log2_biguint(&acc))
}

/// `log₂` of the multinomial coefficient via summed log-factorials.
pub fn log2_multinomial_lgamma(n: u64, counts: &[u64]) -> Result<f64> {
    check_counts("log2_multinomial_lgamma", n, counts)?;
    let mut acc = KahanSum::new();
    acc.add(ln_factorial(n));
    for &k in counts {
        acc.add(-ln_factorial(k));
    }
    Ok(acc.value() / LN_2)
}

/// `log₂` of the multinomial coefficient, switching paths at [`EXACT_CROSSOVER`].
pub fn log2_multinomial(n: u64, counts: &[u64]) -> Result<f64> {
    if n <= EXACT_CROSSOVER {
        log2_multinomial_exact(n, counts)
    } else {
        log2_multinomial_lgamma(n, counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambert_w_fixed_points() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        // mpmath: W(25464.79) = 8.05834392555775...
        assert!((lambert_w0(25464.79).unwrap() - 8.058_343_925_557_751).abs() < 1e-12);
        assert!(lambert_w0(-1e-9).is_err());
        assert!(lambert_w0(f64::NAN).is_err());
    }

    #[test]
    fn lambert_w_series_branch_is_continuous() {
        let below = lambert_w0(0.999_999e-3).unwrap();
        let above = lambert_w0(1.000_001e-3).unwrap();
        assert!(below < above && above - below < 1e-8);
    }

    #[test]
    fn gaussian_tail_values() {
        assert_eq!(gaussian_upper_tail(0.0), 0.5);
        assert_eq!(gaussian_upper_tail(40.0), 0.0);
        assert_eq!(gaussian_upper_tail(f64::INFINITY), 0.0);
        // frozen at 40 digits with mpmath
        for (x, q) in [
            (0.5, 0.308_537_538_725_986_9),
            (1.0, 0.158_655_253_931_457_05),
            (2.0, 0.022_750_131_948_179_207),
            (3.0, 0.001_349_898_031_630_094_6),
            (4.0, 3.167_124_183_311_992e-5),
            (5.0, 2.866_515_718_791_939e-7),
            (6.0, 9.865_876_450_376_981e-10),
            (7.0, 1.279_812_543_885_835e-12),
            (8.0, 6.220_960_574_271_784e-16),
        ] {
            let rel = (gaussian_upper_tail(x) - q).abs() / q;
            assert!(rel < 1e-14, "x = {x}: relative error {rel:e}");
        }
    }

    #[test]
    fn mills_at_one_is_clamped() {
        let s = mills_sandwich(1.0).unwrap();
        assert_eq!(s.lower, 0.0);
        assert!(s.clamped);
        assert!((s.upper - (2.0 / PI).sqrt() * (-0.5_f64).exp()).abs() < 1e-16);
        assert!(mills_sandwich(0.0).is_err());
        assert!(mills_sandwich(-1.0).is_err());
    }

    #[test]
    fn mills_at_two_brackets_tail() {
        let s = mills_sandwich(2.0).unwrap();
        // mpmath: 0.040493224884891, 0.053990966513188, 2Q(2) = 0.045500263896358
        assert!((s.lower - 0.040_493_224_884_891_04).abs() < 1e-15);
        assert!((s.upper - 0.053_990_966_513_188_05).abs() < 1e-15);
        assert!(s.contains(2.0 * gaussian_upper_tail(2.0)));
        assert!(!s.clamped);
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        // mpmath: S_b(0.11) = 0.49991595816452800
        assert!((binary_entropy(0.11).unwrap() - 0.499_915_958_164_528).abs() < 1e-14);
        assert!((binary_entropy(0.3).unwrap() - binary_entropy(0.7).unwrap()).abs() < 1e-15);
        assert!(binary_entropy(0.0).is_err());
        assert!(binary_entropy(1.0).is_err());
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(exact_binomial(37, 0).unwrap(), BigUint::one());
        assert_eq!(exact_binomial(10, 5).unwrap(), BigUint::from(252u32));
        assert_eq!(exact_binomial(1000, 500).unwrap().bits(), 995);
        assert!(exact_binomial(5, 6).is_err());
        assert!(exact_binomial(MAX_BINOMIAL_N + 1, 1).is_err());
    }

    #[test]
    fn binomial_row_matches_direct() {
        let row: Vec<_> = BinomialRow::new(60, 20, 30).unwrap().collect();
        assert_eq!(row.len(), 11);
        for (k, c) in row {
            assert_eq!(c, exact_binomial(60, k).unwrap());
        }
        assert_eq!(BinomialRow::new(10, 5, 4).unwrap().count(), 0);
    }

    #[test]
    fn log2_biguint_large() {
        let two_200 = BigUint::one() << 200u32;
        assert_eq!(log2_biguint(&two_200), 200.0);
        assert_eq!(log2_biguint(&BigUint::zero()), f64::NEG_INFINITY);
    }

    #[test]
    fn ln_factorial_branches_agree() {
        // product branch at 170 vs series branch at 171
        let lhs = ln_factorial(171) - ln_factorial(170);
        assert!((lhs - 171f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn multinomial_small_values() {
        assert_eq!(log2_multinomial(9, &[9]).unwrap(), 0.0);
        assert!((log2_multinomial(4, &[2, 1, 1]).unwrap() - 12f64.log2()).abs() < 1e-15);
        assert!(log2_multinomial(4, &[2, 1]).is_err());
    }

    #[test]
    fn multinomial_dual_path() {
        let exact = log2_multinomial_exact(300, &[90, 90, 120]).unwrap();
        let lg = log2_multinomial_lgamma(300, &[90, 90, 120]).unwrap();
        assert!((exact - lg).abs() < 1e-9, "{exact} vs {lg}");
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut acc = KahanSum::new();
        acc.add(1.0);
        for _ in 0..1000 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-13).abs() < 1e-20);
    }
}
