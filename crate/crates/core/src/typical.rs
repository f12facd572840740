//! Typical-set windows at block size N and the weights, counts and entropies
//! attached to them.
//!
//! Every asymptotic expression here has an exact finite-N counterpart computed
//! from binomial coefficients, and the two are returned together.

use std::f64::consts::{LN_2, PI};
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::special::{
    gaussian_upper_tail, lambert_w0, ln_factorial, log2_biguint, BinomialRow, KahanSum,
    EXACT_CROSSOVER, MAX_BINOMIAL_N,
};
use crate::states::{SchmidtState, TwoTermState};

/// Default ω/γ ratio for the ε_LP2 residual (ω = γ + δ with small δ).
pub const DEFAULT_OMEGA_FACTOR: f64 = 1.0 + 1e-3;

/// Integer window of type classes `k` (number of `p` outcomes) judged typical.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypicalWindow {
    pub n: u64,
    pub gamma: f64,
    pub p: f64,
    pub k_lo: u64,
    pub k_hi: u64,
    /// `Np`.
    pub center: f64,
    /// `γ√N / log₂(q/p)`.
    pub half_width: f64,
    /// Comparison with the defining degeneracy inequality, for `N ≤ 4096`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_definition: Option<ExactDefinition>,
}

impl TypicalWindow {
    pub fn contains(&self, k: u64) -> bool {
        (self.k_lo..=self.k_hi).contains(&k)
    }

    pub fn range(&self) -> RangeInclusive<u64> {
        self.k_lo..=self.k_hi
    }

    /// Number of type classes in the window; never zero.
    pub fn class_count(&self) -> u64 {
        self.k_hi - self.k_lo + 1
    }

    /// Window covering every class, `[0, N]`.
    pub fn full(state: &TwoTermState, n: u64) -> Self {
        TypicalWindow {
            n,
            gamma: f64::INFINITY,
            p: state.p(),
            k_lo: 0,
            k_hi: n,
            center: n as f64 * state.p(),
            half_width: f64::INFINITY,
            exact_definition: None,
        }
    }
}

/// The set `{k : 2^{NS−γ√N} ≤ C(N,k) ≤ 2^{NS+γ√N}}` and how it differs from the
/// linearised window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactDefinition {
    /// Maximal runs of qualifying `k`, ascending. Runs mirrored about `N/2`
    /// appear because `C(N,k) = C(N,N−k)`.
    pub ranges: Vec<(u64, u64)>,
    /// Classes with `k ≤ N/2` in exactly one of the two sets.
    pub boundary_disagreement: u64,
}

/// Linearised typical window `Np ± γ√N/log₂(q/p)`, `k_lo` rounded up and `k_hi`
/// rounded down, clamped to `[0, N]`.
pub fn typical_window(state: &TwoTermState, gamma: f64, n: u64) -> Result<TypicalWindow> {
    state.require_non_degenerate("typical_window")?;
    if !(gamma > 0.0) {
        return Err(domain(
            "typical_window",
            format!("gamma = {gamma} must be > 0"),
        ));
    }
    if n == 0 {
        return Err(domain("typical_window", "N must be >= 1"));
    }
    let nf = n as f64;
    let center = nf * state.p();
    let half_width = gamma * nf.sqrt() / state.log_ratio();
    let lo = (center - half_width).ceil().max(0.0);
    let hi = (center + half_width).floor().min(nf);
    if lo > hi {
        return Err(domain(
            "typical_window",
            format!("empty window at gamma = {gamma}, N = {n}"),
        ));
    }
    let mut window = TypicalWindow {
        n,
        gamma,
        p: state.p(),
        k_lo: lo as u64,
        k_hi: hi as u64,
        center,
        half_width,
        exact_definition: None,
    };
    if n <= EXACT_CROSSOVER {
        window.exact_definition = Some(exact_definition(state, gamma, n, &window)?);
    }
    Ok(window)
}

fn exact_definition(
    state: &TwoTermState,
    gamma: f64,
    n: u64,
    window: &TypicalWindow,
) -> Result<ExactDefinition> {
    let nf = n as f64;
    let ns = nf * state.entropy();
    let (lo, hi) = (ns - gamma * nf.sqrt(), ns + gamma * nf.sqrt());
    let mut ranges: Vec<(u64, u64)> = Vec::new();
    let mut disagreement = 0;
    for (k, c) in BinomialRow::new(n, 0, n)? {
        let l = log2_biguint(&c);
        let inside = lo <= l && l <= hi;
        if inside {
            match ranges.last_mut() {
                Some((_, end)) if *end + 1 == k => *end = k,
                _ => ranges.push((k, k)),
            }
        }
        if 2 * k <= n && inside != window.contains(k) {
            disagreement += 1;
        }
    }
    Ok(ExactDefinition {
        ranges,
        boundary_disagreement: disagreement,
    })
}

/// `log₂ C(N,k)` for every `k ∈ 0..=N`.
fn log2_binomial_row(n: u64) -> Result<Vec<f64>> {
    if n > MAX_BINOMIAL_N {
        return Err(domain(
            "log2_binomial_row",
            format!("N = {n} exceeds {MAX_BINOMIAL_N}"),
        ));
    }
    if n <= EXACT_CROSSOVER {
        Ok(BinomialRow::new(n, 0, n)?
            .map(|(_, c)| log2_biguint(&c))
            .collect())
    } else {
        let ln_n = ln_factorial(n);
        Ok((0..=n)
            .map(|k| (ln_n - ln_factorial(k) - ln_factorial(n - k)) / LN_2)
            .collect())
    }
}

/// `log₂(p^k q^{N−k})`.
fn log2_class_prob(state: &TwoTermState, n: u64, k: u64) -> f64 {
    k as f64 * state.p().log2() + (n - k) as f64 * state.q().log2()
}

/// `1 − Σ_{k∈window} C(N,k) p^k q^{N−k}`, summed directly over the two tails.
pub fn atypical_weight_exact(state: &TwoTermState, window: &TypicalWindow) -> Result<f64> {
    let n = window.n;
    let row = log2_binomial_row(n)?;
    let acc: KahanSum = (0..=n)
        .filter(|k| !window.contains(*k))
        .map(|k| (row[k as usize] + log2_class_prob(state, n, k)).exp2())
        .collect();
    Ok(acc.value().clamp(0.0, 1.0))
}

/// Two-sided Gaussian tail `2Q(x)`, the large-N atypical weight at `x = γ/α`.
pub fn atypical_weight_gaussian(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(
            "atypical_weight_gaussian",
            format!("x = {x} must be > 0"),
        ));
    }
    Ok(2.0 * gaussian_upper_tail(x))
}

/// Bound on the weight of typical terms pushed into the error to give every
/// kept class a common degeneracy `2^{NS−ω√N}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonLp2Bound {
    /// `2^{−(ω−γ)√N} / ln(q/p)`.
    pub asymptotic: f64,
    /// `2^{−ω√N}(2^{γ√N} − 2^{−γ√N}) / ln(q/p)`.
    pub finite_n: f64,
}

pub fn epsilon_lp2_bound(
    state: &TwoTermState,
    gamma: f64,
    omega: f64,
    n: u64,
) -> Result<EpsilonLp2Bound> {
    state.require_non_degenerate("epsilon_lp2_bound")?;
    if !(omega > gamma) {
        return Err(domain(
            "epsilon_lp2_bound",
            format!("omega = {omega} must exceed gamma = {gamma}"),
        ));
    }
    let rt = (n as f64).sqrt();
    let ln_ratio = (state.q() / state.p()).ln();
    Ok(EpsilonLp2Bound {
        asymptotic: (-(omega - gamma) * rt).exp2() / ln_ratio,
        finite_n: ((-(omega - gamma) * rt).exp2() - (-(omega + gamma) * rt).exp2()) / ln_ratio,
    })
}

/// Brute-force ε_LP2 for one window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonLp2Exact {
    /// `Σ_{k typical} (C(N,k) mod D) p^k q^{N−k}` with `D = 2^{⌊NS−ω√N⌋}`.
    pub exact: f64,
    /// `2^{NS−ω√N} Σ_{k typical} p^k q^{N−k}`.
    pub sum_bound: f64,
    /// The closed-form bound for the same parameters.
    pub closed_form: EpsilonLp2Bound,
    pub log2_common_degeneracy: u64,
}

/// Enumerates the typical classes, keeps the largest multiple of the common
/// degeneracy `D` in each, and sums the weight of the remainders.
pub fn epsilon_lp2_exact(
    state: &TwoTermState,
    window: &TypicalWindow,
    omega: f64,
) -> Result<EpsilonLp2Exact> {
    let n = window.n;
    if n > EXACT_CROSSOVER {
        return Err(Error::EnumerationLimit(format!(
            "exact epsilon_LP2 needs N <= {EXACT_CROSSOVER}, got {n}"
        )));
    }
    let closed_form = epsilon_lp2_bound(state, window.gamma, omega, n)?;
    let nf = n as f64;
    let exponent = nf * state.entropy() - omega * nf.sqrt();
    let log2_d = exponent.max(0.0).floor() as u64;
    let d = BigUint::from(1u8) << log2_d;

    let mut exact = KahanSum::new();
    let mut probs = KahanSum::new();
    for (k, c) in BinomialRow::new(n, window.k_lo, window.k_hi)? {
        let lp = log2_class_prob(state, n, k);
        let rem = c % &d;
        if !rem.is_zero() {
            exact.add((log2_biguint(&rem) + lp).exp2());
        }
        probs.add(lp.exp2());
    }
    Ok(EpsilonLp2Exact {
        exact: exact.value(),
        sum_bound: exponent.exp2() * probs.value(),
        closed_form,
        log2_common_degeneracy: log2_d,
    })
}

/// Largest `γ/α` admitted by the Mills upper bound at atypical weight `eps_lp1`:
/// `√W(2/(π ε²))`.
pub fn gamma_from_error_two_term(eps_lp1: f64) -> Result<f64> {
    if !(eps_lp1 > 0.0 && eps_lp1 < 1.0) {
        return Err(domain(
            "gamma_from_error_two_term",
            format!("eps_lp1 = {eps_lp1} is outside (0, 1)"),
        ));
    }
    Ok(lambert_w0(2.0 / (PI * eps_lp1 * eps_lp1))?.sqrt())
}

/// Largest `γ/Ω_t` for Schmidt rank `m`: `√W(1/(2π (ε/2)^{2/(m−1)}))`.
pub fn gamma_from_error_general(eps_lp1: f64, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(domain(
            "gamma_from_error_general",
            format!("rank m = {m} < 2"),
        ));
    }
    if !(eps_lp1 > 0.0 && eps_lp1 < 2.0) {
        return Err(domain(
            "gamma_from_error_general",
            format!("eps_lp1 = {eps_lp1} is outside (0, 2)"),
        ));
    }
    let half_pow = (0.5 * eps_lp1).powf(2.0 / (m - 1) as f64);
    Ok(lambert_w0(1.0 / (2.0 * PI * half_pow))?.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultinomialAtypical {
    /// `2 / [√(2π) x]^{m−1} · e^{−(m−1)x²/2}`.
    pub bound: f64,
    /// `2 (1 − 2Q(x))^{m−1}`, the intermediate expression as printed.
    pub central_form: f64,
}

pub fn multinomial_atypical_bound(x: f64, m: usize) -> Result<MultinomialAtypical> {
    if !(x > 0.0) {
        return Err(domain(
            "multinomial_atypical_bound",
            format!("x = {x} must be > 0"),
        ));
    }
    if m < 2 {
        return Err(domain(
            "multinomial_atypical_bound",
            format!("rank m = {m} < 2"),
        ));
    }
    let e = (m - 1) as i32;
    Ok(MultinomialAtypical {
        bound: 2.0 / ((2.0 * PI).sqrt() * x).powi(e) * (-(e as f64) * x * x / 2.0).exp(),
        central_form: 2.0 * (1.0 - 2.0 * gaussian_upper_tail(x)).powi(e),
    })
}

/// `log₂` of the typical Schmidt number `Σ_{k∈window} C(N,k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TypicalCount {
    pub log2_count: f64,
    /// `N·S(ψ)`.
    pub ns: f64,
    /// `γ√N`.
    pub gamma_sqrt_n: f64,
    /// Smallest `c ≥ 0` with `|log2_count − NS| ≤ γ√N + c·log₂N`.
    pub slack_c: f64,
}

impl TypicalCount {
    pub fn within(&self, c: f64, n: u64) -> bool {
        let slack = self.gamma_sqrt_n + c * (n as f64).log2();
        (self.log2_count - self.ns).abs() <= slack
    }
}

pub fn typical_schmidt_log2(state: &TwoTermState, window: &TypicalWindow) -> Result<TypicalCount> {
    let n = window.n;
    let mut total = BigUint::zero();
    for (_, c) in BinomialRow::new(n, window.k_lo, window.k_hi)? {
        total += c;
    }
    let log2_count = log2_biguint(&total);
    let nf = n as f64;
    let ns = nf * state.entropy();
    let gamma_sqrt_n = if window.gamma.is_finite() {
        window.gamma * nf.sqrt()
    } else {
        f64::INFINITY
    };
    let excess = (log2_count - ns).abs() - gamma_sqrt_n;
    let slack_c = if excess > 0.0 && n > 1 {
        excess / nf.log2()
    } else {
        0.0
    };
    Ok(TypicalCount {
        log2_count,
        ns,
        gamma_sqrt_n,
        slack_c,
    })
}

/// Entropy carried by the typical classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TypicalEntropy {
    /// `−Σ_{k∈window} C(N,k) p^k q^{N−k} log₂(p^k q^{N−k})`.
    pub unnormalized: f64,
    /// `Σ_{k∈window} C(N,k) p^k q^{N−k} = 1 − ε_LP1`.
    pub weight: f64,
    /// Entropy of the renormalised typical component.
    pub normalized: f64,
    pub ns: f64,
    /// `NS(ψ)(1 − ε_LP1)` with the exact atypical weight.
    pub asymptotic: f64,
    /// `unnormalized / asymptotic`.
    pub ratio: f64,
}

impl TypicalEntropy {
    pub fn normalized_per_copy(&self, n: u64) -> f64 {
        self.normalized / n as f64
    }
}

pub fn typical_entropy(state: &TwoTermState, window: &TypicalWindow) -> Result<TypicalEntropy> {
    let n = window.n;
    let row = log2_binomial_row(n)?;
    let mut entropy = KahanSum::new();
    let mut weight = KahanSum::new();
    for k in window.range() {
        let lp = log2_class_prob(state, n, k);
        let w = (row[k as usize] + lp).exp2();
        weight.add(w);
        entropy.add(-w * lp);
    }
    let (unnormalized, weight) = (entropy.value(), weight.value());
    let ns = n as f64 * state.entropy();
    let eps_lp1 = atypical_weight_exact(state, window)?;
    let asymptotic = ns * (1.0 - eps_lp1);
    Ok(TypicalEntropy {
        unnormalized,
        weight,
        normalized: unnormalized / weight + weight.log2(),
        ns,
        asymptotic,
        ratio: unnormalized / asymptotic,
    })
}

/// Typical region for a general state: a per-axis box `|yᵢ| ≤ γ/Ω_t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultinomialTypicalSpec {
    pub state: SchmidtState,
    pub n: u64,
    pub gamma: f64,
    pub omega_t: f64,
}

impl MultinomialTypicalSpec {
    pub fn new(state: SchmidtState, n: u64, gamma: f64, omega_t: f64) -> Result<Self> {
        if !(gamma > 0.0 && omega_t > 0.0) {
            return Err(domain(
                "MultinomialTypicalSpec::new",
                format!("gamma = {gamma} and omega_t = {omega_t} must be > 0"),
            ));
        }
        Ok(Self {
            state,
            n,
            gamma,
            omega_t,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.gamma / self.omega_t
    }
}

/// The substitution
/// `yᵢ = (kᵢ − (N − k₁ − … − k_{i−1}) pᵢ/π_{i−1}) / √(N pᵢ πᵢ/π_{i−1})`
/// for `i < m`, with the probabilities in stored order.
pub fn multinomial_y(state: &SchmidtState, n: u64, counts: &[u64]) -> Result<Vec<f64>> {
    let p = state.probs();
    let m = p.len();
    if counts.len() != m {
        return Err(domain(
            "multinomial_y",
            format!("{} counts for Schmidt rank {m}", counts.len()),
        ));
    }
    if counts.iter().sum::<u64>() != n {
        return Err(domain(
            "multinomial_y",
            format!("counts do not sum to N = {n}"),
        ));
    }
    let nf = n as f64;
    let mut y = Vec::with_capacity(m - 1);
    let mut pi_prev = 1.0;
    let mut used = 0u64;
    for i in 0..m - 1 {
        let pi_i = pi_prev - p[i];
        let expected = (n - used) as f64 * p[i] / pi_prev;
        y.push((counts[i] as f64 - expected) / (nf * p[i] * pi_i / pi_prev).sqrt());
        used += counts[i];
        pi_prev = pi_i;
    }
    Ok(y)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultinomialMembership {
    /// Box criterion `|yᵢ| ≤ γ/Ω_t` on every axis.
    pub typical: bool,
    pub y: Vec<f64>,
    /// `Σ Ωᵢ yᵢ` (stored order).
    pub linear_form: f64,
    /// `|Σ Ωᵢ yᵢ| ≤ γ`.
    pub linear_typical: bool,
}

pub fn multinomial_is_typical(
    spec: &MultinomialTypicalSpec,
    counts: &[u64],
) -> Result<MultinomialMembership> {
    let y = multinomial_y(&spec.state, spec.n, counts)?;
    let omegas = spec.state.omega_vector_stored()?;
    let half = spec.half_width();
    let linear_form: f64 = omegas.iter().zip(&y).map(|(w, yi)| w * yi).sum();
    Ok(MultinomialMembership {
        typical: y.iter().all(|v| v.abs() <= half),
        linear_typical: linear_form.abs() <= spec.gamma,
        y,
        linear_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tt(p: f64) -> TwoTermState {
        TwoTermState::new(p).unwrap()
    }

    #[test]
    fn window_examples() {
        // 307.2 ± 32/log2(7/3) = 307.2 ± 26.178
        let w = typical_window(&tt(0.3), 1.0, 1024).unwrap();
        assert_eq!((w.k_lo, w.k_hi), (282, 333));
        assert!((w.half_width - 26.178_172_771_240_05).abs() < 1e-10);
        // 1761.28 ± 78.6965
        let w = typical_window(&tt(0.43), 0.5, 4096).unwrap();
        assert_eq!((w.k_lo, w.k_hi), (1683, 1839));
        let w = typical_window(&tt(0.25), 100.0, 64).unwrap();
        assert_eq!((w.k_lo, w.k_hi), (0, 64));
    }

    #[test]
    fn window_rejects_degenerate_and_bad_gamma() {
        assert!(typical_window(&tt(0.5), 1.0, 100).is_err());
        assert!(typical_window(&tt(0.3), 0.0, 100).is_err());
        assert!(typical_window(&tt(0.3), 1.0, 0).is_err());
    }

    #[test]
    fn exact_definition_is_reported() {
        let w = typical_window(&tt(0.3), 1.0, 1024).unwrap();
        let ex = w.exact_definition.as_ref().unwrap();
        // the exact set has a mirror run near N(1 - p)
        assert_eq!(ex.ranges.len(), 2);
        let (a, b) = ex.ranges[0];
        assert!(a > 250 && b < 350, "{:?}", ex.ranges);
        assert_eq!(ex.ranges[1], (1024 - b, 1024 - a));
        assert!(typical_window(&tt(0.3), 1.0, 5000)
            .unwrap()
            .exact_definition
            .is_none());
    }

    #[test]
    fn full_window_has_no_atypical_weight() {
        let s = tt(0.3);
        let w = TypicalWindow::full(&s, 200);
        assert_eq!(atypical_weight_exact(&s, &w).unwrap(), 0.0);
        let e = typical_entropy(&s, &w).unwrap();
        assert!((e.unnormalized - e.ns).abs() < 1e-10 * e.ns);
        assert!((e.normalized - e.ns).abs() < 1e-10 * e.ns);
    }

    #[test]
    fn gaussian_weight() {
        // mpmath: 2Q(1) = 0.31731050786291410, 2Q(2.8387) = 0.0045297722308761
        assert!((atypical_weight_gaussian(1.0).unwrap() - 0.317_310_507_862_914_1).abs() < 1e-15);
        assert!(
            (atypical_weight_gaussian(2.8387).unwrap() - 0.004_529_772_230_876_07).abs() < 1e-16
        );
        assert_eq!(atypical_weight_gaussian(50.0).unwrap(), 0.0);
        assert!(atypical_weight_gaussian(0.0).is_err());
    }

    #[test]
    fn lp2_bound_forms() {
        let b = epsilon_lp2_bound(&tt(0.3), 1.0, 1.2, 1024).unwrap();
        let ratio = b.finite_n / b.asymptotic;
        assert!((ratio - (1.0 - (-2.0 * 32.0f64).exp2())).abs() < 1e-15);
        let b = epsilon_lp2_bound(&tt(0.3), 1.0, 2.0, 10_000).unwrap();
        assert!((b.asymptotic - (-100.0f64).exp2() / (0.7f64 / 0.3).ln()).abs() < 1e-40);
        assert!(epsilon_lp2_bound(&tt(0.3), 1.0, 1.0, 100).is_err());
    }

    #[test]
    fn inversions() {
        // mpmath: sqrt(W(8/(pi 1e-4))) = 2.838722240166151
        let g = gamma_from_error_two_term(0.005).unwrap();
        assert!((g - 2.838_722_240_166_151).abs() < 1e-12);
        assert!(gamma_from_error_two_term(0.9).unwrap() < 1.0);
        assert!(gamma_from_error_two_term(0.0).is_err());
        assert!(gamma_from_error_two_term(1.0).is_err());

        // mpmath: sqrt(W(1/(2 pi 0.0025))) = 1.743932861387843
        let g3 = gamma_from_error_general(0.005, 3).unwrap();
        assert!((g3 - 1.743_932_861_387_843).abs() < 1e-12);
        let g2 = gamma_from_error_general(0.005, 2).unwrap();
        assert!((g2 - g).abs() < 1e-12);
        assert!(gamma_from_error_general(0.005, 1).is_err());
        assert!(gamma_from_error_general(2.0, 3).is_err());
    }

    #[test]
    fn multinomial_bound_reductions() {
        let x = 1.7;
        let two = multinomial_atypical_bound(x, 2).unwrap();
        assert!((two.bound - crate::special::mills_upper(x)).abs() < 1e-16);
        let g3 = gamma_from_error_general(0.005, 3).unwrap();
        let three = multinomial_atypical_bound(g3, 3).unwrap();
        assert!((three.bound - 0.005).abs() < 1e-12);
        assert!(multinomial_atypical_bound(0.0, 3).is_err());
    }

    #[test]
    fn schmidt_count_single_class() {
        let s = tt(0.3);
        let mut w = typical_window(&s, 1.0, 100).unwrap();
        w.k_lo = 0;
        w.k_hi = 0;
        assert_eq!(typical_schmidt_log2(&s, &w).unwrap().log2_count, 0.0);
    }

    #[test]
    fn multinomial_y_centered_and_hand_checked() {
        let state = SchmidtState::new(vec![0.3, 0.3, 0.4]).unwrap();
        let spec =
            MultinomialTypicalSpec::new(state.clone(), 300, 1.0, 0.171_841_850_452_744_4).unwrap();
        let m = multinomial_is_typical(&spec, &[90, 90, 120]).unwrap();
        assert!(m.typical && m.linear_typical);
        assert!(m.y.iter().all(|v| v.abs() < 1e-12));

        // mpmath
        let y = multinomial_y(&state, 300, &[120, 60, 120]).unwrap();
        assert!((y[0] - 3.779_644_730_092_272).abs() < 1e-12);
        assert!((y[1] + 2.390_457_218_668_787).abs() < 1e-12);
        assert!(multinomial_y(&state, 300, &[120, 180]).is_err());
        assert!(multinomial_y(&state, 300, &[120, 60, 121]).is_err());
    }
}
