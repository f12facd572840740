//! Resource ledger of the Lo-Popescu dilution protocol.
//!
//! `N` copies of ψ are split as `Φ^d ⊗ Δ` plus an error term. The maximally
//! entangled factor `Φ^d` comes for free from shared singlets; only half of the
//! residual `Δ` is teleported. The ledger records the size of each piece and what
//! it costs, either from the large-N formulas or from exact enumeration of the
//! type classes at the given N.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::special::{ln_factorial, KahanSum};
use crate::states::{LogBase, OmegaStrategy, SchmidtState, TwoTermState};
use crate::typical::{
    atypical_weight_exact, atypical_weight_gaussian, epsilon_lp2_bound, multinomial_atypical_bound,
    typical_entropy, typical_schmidt_log2, typical_window, DEFAULT_OMEGA_FACTOR,
};

/// Largest block size for exact general-state enumeration.
pub const MAX_GENERAL_EXACT_N: u64 = 300;

/// Largest number of compositions enumerated in exact general mode.
pub const MAX_COMPOSITIONS: u128 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Asymptotic,
    ExactFiniteN,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asymptotic" => Ok(Mode::Asymptotic),
            "exact" | "exact-finite-n" => Ok(Mode::ExactFiniteN),
            _ => Err(Error::Parse(format!(
                "mode {s:?}: expected asymptotic or exact"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Asymptotic => "asymptotic",
            Mode::ExactFiniteN => "exact-finite-n",
        })
    }
}

/// How the distance between the protocol output and the ideal typical state is
/// computed from the atypical weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TraceDistanceFormula {
    /// `2 ε_LP1`, dropping the cross terms.
    #[default]
    Paper,
    /// Trace norm of the difference of the two normalised pure states.
    ExactPureState,
}

impl FromStr for TraceDistanceFormula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(TraceDistanceFormula::Paper),
            "exact" | "exact-pure-state" => Ok(TraceDistanceFormula::ExactPureState),
            _ => Err(Error::Parse(format!(
                "trace distance {s:?}: expected paper or exact"
            ))),
        }
    }
}

impl fmt::Display for TraceDistanceFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceDistanceFormula::Paper => "paper",
            TraceDistanceFormula::ExactPureState => "exact-pure-state",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpDecomposition {
    pub probs: Vec<f64>,
    pub n: u64,
    pub gamma: f64,
    /// `log₂` dimension of the maximally entangled factor, `NS − γ√N` (not floored).
    pub d: f64,
    pub sch_delta_log2: f64,
    pub entropy_delta: f64,
    pub eps_lp1: f64,
    /// Claim-One bound on the typical weight moved into the error term. Only the
    /// two-term analysis gives a closed form.
    pub eps_lp2_bound: Option<f64>,
    pub cc_cost_bits: f64,
    pub inefficiency_ebits: f64,
    pub mode: Mode,
    pub provenance: LpProvenance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpProvenance {
    pub omega_factor: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_strategy: Option<OmegaStrategy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_log_base: Option<LogBase>,
    /// Exact mode: log₂ of the typical Schmidt number.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log2_typical_count: Option<f64>,
    /// Exact mode: entropy of the renormalised typical component.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub typical_entropy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<(u64, u64)>,
}

impl LpProvenance {
    fn new(omega_factor: f64) -> Self {
        Self {
            omega_factor,
            omega_t: None,
            omega_strategy: None,
            omega_log_base: None,
            log2_typical_count: None,
            typical_entropy: None,
            window: None,
        }
    }
}

fn maximal_factor(ns: f64, gamma: f64, n: u64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(domain("decompose", format!("gamma = {gamma} must be > 0")));
    }
    if n == 0 {
        return Err(domain("decompose", "N must be >= 1"));
    }
    let d = ns - gamma * (n as f64).sqrt();
    if d <= 0.0 {
        return Err(Error::NoTypicalFactor { d });
    }
    Ok(d)
}

/// Ledger for a two-term state with the default ω = γ(1 + 10⁻³).
pub fn decompose(state: &TwoTermState, n: u64, gamma: f64, mode: Mode) -> Result<LpDecomposition> {
    decompose_with_omega(state, n, gamma, mode, DEFAULT_OMEGA_FACTOR)
}

pub fn decompose_with_omega(
    state: &TwoTermState,
    n: u64,
    gamma: f64,
    mode: Mode,
    omega_factor: f64,
) -> Result<LpDecomposition> {
    state.require_non_degenerate("decompose")?;
    let ns = n as f64 * state.entropy();
    let d = maximal_factor(ns, gamma, n)?;
    let gsn = gamma * (n as f64).sqrt();
    let eps_lp2 = epsilon_lp2_bound(state, gamma, gamma * omega_factor, n)?.asymptotic;
    let mut provenance = LpProvenance::new(omega_factor);

    let (sch_delta_log2, entropy_delta, eps_lp1) = match mode {
        Mode::Asymptotic => (
            2.0 * gsn,
            gsn,
            atypical_weight_gaussian(gamma / state.alpha())?,
        ),
        Mode::ExactFiniteN => {
            let window = typical_window(state, gamma, n)?;
            let count = typical_schmidt_log2(state, &window)?;
            let entropy = typical_entropy(state, &window)?;
            provenance.log2_typical_count = Some(count.log2_count);
            provenance.typical_entropy = Some(entropy.normalized);
            provenance.window = Some((window.k_lo, window.k_hi));
            (
                count.log2_count - d,
                entropy.normalized - d,
                atypical_weight_exact(state, &window)?,
            )
        }
    };

    let mut out = LpDecomposition {
        probs: vec![state.p(), state.q()],
        n,
        gamma,
        d,
        sch_delta_log2,
        entropy_delta,
        eps_lp1,
        eps_lp2_bound: Some(eps_lp2),
        cc_cost_bits: 0.0,
        inefficiency_ebits: sch_delta_log2 - entropy_delta,
        mode,
        provenance,
    };
    out.cc_cost_bits = cc_cost(&out).cost_bits;
    Ok(out)
}

/// Classical communication needed to deliver half of `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CcLedger {
    /// `log₂ Sch(Δ)` qubits to teleport.
    pub teleport_qubits: f64,
    /// Two bits per teleported qubit.
    pub naive_bits: f64,
    /// Half the naive cost, using remote state preparation.
    pub cost_bits: f64,
}

/// Asymptotically `½·2·2γ√N = 2γ√N` bits; in exact mode `log₂ Sch(Δ)` bits.
pub fn cc_cost(decomp: &LpDecomposition) -> CcLedger {
    let teleport_qubits = match decomp.mode {
        Mode::Asymptotic => 2.0 * decomp.gamma * (decomp.n as f64).sqrt(),
        Mode::ExactFiniteN => decomp.sch_delta_log2,
    };
    let naive_bits = 2.0 * teleport_qubits;
    CcLedger {
        teleport_qubits,
        naive_bits,
        cost_bits: 0.5 * naive_bits,
    }
}

/// Trace distance between the protocol output and the renormalised typical
/// state when the discarded weight is `eps_lp1`.
pub fn trace_distance_for_weight(eps_lp1: f64, formula: TraceDistanceFormula) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps_lp1) {
        return Err(domain(
            "trace_distance",
            format!("eps_lp1 = {eps_lp1} is outside [0, 1]"),
        ));
    }
    Ok(match formula {
        TraceDistanceFormula::Paper => 2.0 * eps_lp1,
        TraceDistanceFormula::ExactPureState => pure_state_trace_norm(1.0 - eps_lp1),
    })
}

pub fn trace_distance_to_ideal(
    decomp: &LpDecomposition,
    formula: TraceDistanceFormula,
) -> Result<f64> {
    trace_distance_for_weight(decomp.eps_lp1, formula)
}

/// `Tr|ψψ† − φφ†|` for unit vectors with `|⟨ψ|φ⟩|² = overlap`.
///
/// In the basis `{ψ, φ⊥}` the difference is `[[1−c², −cs], [−cs, −s²]]` with
/// `c = √overlap`, `s = √(1−overlap)`; its eigenvalues are `±√(Δ₁₁² + Δ₁₂²)`
/// since the trace vanishes.
fn pure_state_trace_norm(overlap: f64) -> f64 {
    let c2 = overlap;
    let s2 = 1.0 - overlap;
    let a = 1.0 - c2;
    let b = (c2 * s2).sqrt();
    let d = -s2;
    let half_tr = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (half_tr + disc).abs() + (half_tr - disc).abs()
}

/// Ledger for a general Schmidt state.
///
/// Asymptotic mode uses Ω_t and the per-axis box bound for ε_LP1. Exact mode
/// enumerates every composition of `N` into `m` parts and classifies them by
/// `NS − γ√N ≤ log₂ C(N; k₁…k_m) ≤ NS + γ√N`.
pub fn decompose_general(
    state: &SchmidtState,
    n: u64,
    gamma: f64,
    strategy: OmegaStrategy,
    base: LogBase,
    mode: Mode,
) -> Result<LpDecomposition> {
    let m = state.rank();
    let ns = n as f64 * state.entropy();
    let d = maximal_factor(ns, gamma, n)?;
    let gsn = gamma * (n as f64).sqrt();
    let omega_t = state.omega_t(strategy, base)?;

    let mut provenance = LpProvenance::new(DEFAULT_OMEGA_FACTOR);
    provenance.omega_t = Some(omega_t.value);
    provenance.omega_strategy = Some(strategy);
    provenance.omega_log_base = Some(omega_t.log_base);

    let eps_lp2_bound = match state.as_two_term() {
        Ok(tt) if !tt.is_degenerate() => {
            Some(epsilon_lp2_bound(&tt, gamma, gamma * DEFAULT_OMEGA_FACTOR, n)?.asymptotic)
        }
        _ => None,
    };

    let (sch_delta_log2, entropy_delta, eps_lp1) = match mode {
        Mode::Asymptotic => (
            2.0 * gsn,
            gsn,
            multinomial_atypical_bound(gamma / omega_t.value, m)?.bound,
        ),
        Mode::ExactFiniteN => {
            let e = enumerate_general(state, n, gamma)?;
            if e.typical_classes == 0 {
                return Err(Error::EmptyTypicalSet(format!(
                    "no type class has log2 multiplicity within NS +/- gamma sqrt(N) = {ns} +/- {gsn} \
                     at N = {n}; increase N or gamma"
                )));
            }
            provenance.log2_typical_count = Some(e.log2_count);
            provenance.typical_entropy = Some(e.normalized_entropy);
            (
                e.log2_count - d,
                e.normalized_entropy - d,
                e.atypical_weight,
            )
        }
    };

    let mut out = LpDecomposition {
        probs: state.probs().to_vec(),
        n,
        gamma,
        d,
        sch_delta_log2,
        entropy_delta,
        eps_lp1,
        eps_lp2_bound,
        cc_cost_bits: 0.0,
        inefficiency_ebits: sch_delta_log2 - entropy_delta,
        mode,
        provenance,
    };
    out.cc_cost_bits = cc_cost(&out).cost_bits;
    Ok(out)
}

/// Totals from classifying every type class of a general state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralEnumeration {
    pub compositions: u64,
    pub typical_classes: u64,
    pub atypical_weight: f64,
    pub log2_count: f64,
    pub normalized_entropy: f64,
}

fn composition_count(n: u64, m: usize) -> u128 {
    // C(n + m - 1, m - 1)
    let mut acc: u128 = 1;
    for i in 1..m as u128 {
        acc = acc * (n as u128 + i) / i;
    }
    acc
}

/// Exact classification of all compositions of `N` into `m` parts.
pub fn enumerate_general(state: &SchmidtState, n: u64, gamma: f64) -> Result<GeneralEnumeration> {
    let m = state.rank();
    let total = composition_count(n, m);
    if n > MAX_GENERAL_EXACT_N || total > MAX_COMPOSITIONS {
        return Err(Error::EnumerationLimit(format!(
            "N = {n}, m = {m} gives {total} compositions \
             (limits: N <= {MAX_GENERAL_EXACT_N}, {MAX_COMPOSITIONS} compositions)"
        )));
    }
    let nf = n as f64;
    let ns = nf * state.entropy();
    let (lo, hi) = (ns - gamma * nf.sqrt(), ns + gamma * nf.sqrt());
    let log2_fact: Vec<f64> = (0..=n)
        .map(|k| ln_factorial(k) / std::f64::consts::LN_2)
        .collect();
    let log2_p: Vec<f64> = state.probs().iter().map(|p| p.log2()).collect();

    let mut atypical = KahanSum::new();
    let mut weight = KahanSum::new();
    let mut entropy = KahanSum::new();
    let mut count = KahanSum::new();
    let mut typical_classes = 0u64;
    let mut compositions = 0u64;

    let mut counts = vec![0u64; m];
    counts[m - 1] = n;
    loop {
        compositions += 1;
        let log2_multi =
            log2_fact[n as usize] - counts.iter().map(|&k| log2_fact[k as usize]).sum::<f64>();
        let log2_prob: f64 = counts
            .iter()
            .zip(&log2_p)
            .map(|(&k, lp)| k as f64 * lp)
            .sum();
        let w = (log2_multi + log2_prob).exp2();
        if lo <= log2_multi && log2_multi <= hi {
            typical_classes += 1;
            weight.add(w);
            entropy.add(-w * log2_prob);
            count.add((log2_multi - hi).exp2());
        } else {
            atypical.add(w);
        }
        if !next_composition(&mut counts) {
            break;
        }
    }

    let weight = weight.value();
    let count = count.value();
    Ok(GeneralEnumeration {
        compositions,
        typical_classes,
        atypical_weight: atypical.value().clamp(0.0, 1.0),
        log2_count: if count > 0.0 {
            hi + count.log2()
        } else {
            f64::NEG_INFINITY
        },
        normalized_entropy: if weight > 0.0 {
            entropy.value() / weight + weight.log2()
        } else {
            0.0
        },
    })
}

/// Steps through compositions of a fixed total, starting from `(0, …, 0, N)`
/// and ending at `(N, 0, …, 0)`.
fn next_composition(c: &mut [u64]) -> bool {
    let m = c.len();
    // rightmost non-zero entry among positions 1..m, moved one step left
    let Some(j) = (1..m).rev().find(|&j| c[j] > 0) else {
        return false;
    };
    let tail = c[j];
    c[j] = 0;
    c[j - 1] += 1;
    c[m - 1] = tail - 1;
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tt(p: f64) -> TwoTermState {
        TwoTermState::new(p).unwrap()
    }

    #[test]
    fn asymptotic_plug_in() {
        let d = decompose(&tt(0.3), 1024, 1.0, Mode::Asymptotic).unwrap();
        // NS = 902.4418808122292
        assert!((d.d - 870.441_880_812_229_2).abs() < 1e-9);
        assert_eq!(d.sch_delta_log2, 64.0);
        assert_eq!(d.entropy_delta, 32.0);
        assert_eq!(d.inefficiency_ebits, 32.0);
        assert_eq!(d.cc_cost_bits, 64.0);
    }

    #[test]
    fn small_gamma_limit() {
        let d = decompose(&tt(0.3), 1024, 1e-9, Mode::Asymptotic).unwrap();
        assert!(d.sch_delta_log2 < 1e-6 && d.inefficiency_ebits < 1e-6);
        assert!(d.eps_lp1 > 1.0 - 1e-6);
    }

    #[test]
    fn no_typical_factor() {
        let err = decompose(&tt(0.3), 4, 10.0, Mode::Asymptotic).unwrap_err();
        assert!(matches!(err, Error::NoTypicalFactor { .. }));
        assert!(decompose(&tt(0.5), 100, 1.0, Mode::Asymptotic).is_err());
    }

    #[test]
    fn cc_ledger_halves_naive_cost() {
        let d = decompose(&tt(0.3), 1024, 1.0, Mode::Asymptotic).unwrap();
        let l = cc_cost(&d);
        assert_eq!(
            (l.teleport_qubits, l.naive_bits, l.cost_bits),
            (64.0, 128.0, 64.0)
        );
        let d2 = decompose(&tt(0.3), 1024, 2.0, Mode::Asymptotic).unwrap();
        assert_eq!(d2.cc_cost_bits, 2.0 * d.cc_cost_bits);
    }

    #[test]
    fn trace_distance_closed_forms() {
        for f in [
            TraceDistanceFormula::Paper,
            TraceDistanceFormula::ExactPureState,
        ] {
            assert_eq!(trace_distance_for_weight(0.0, f).unwrap(), 0.0);
        }
        let paper = trace_distance_for_weight(0.005, TraceDistanceFormula::Paper).unwrap();
        let exact = trace_distance_for_weight(0.005, TraceDistanceFormula::ExactPureState).unwrap();
        assert_eq!(paper, 0.01);
        assert!((exact - 2.0 * 0.005f64.sqrt()).abs() < 1e-15);
        assert!(trace_distance_for_weight(1.5, TraceDistanceFormula::Paper).is_err());
    }

    #[test]
    fn compositions_are_complete() {
        let mut c = vec![0, 0, 5];
        let mut seen = 1;
        while next_composition(&mut c) {
            assert_eq!(c.iter().sum::<u64>(), 5);
            seen += 1;
        }
        assert_eq!(c, vec![5, 0, 0]);
        assert_eq!(seen, 21);
        assert_eq!(composition_count(5, 3), 21);
    }

    #[test]
    fn general_enumeration_limits() {
        let s = SchmidtState::new(vec![0.2; 5]).unwrap();
        assert!(matches!(
            enumerate_general(&s, 300, 1.0),
            Err(Error::EnumerationLimit(_))
        ));
        assert!(matches!(
            enumerate_general(&s, 301, 1.0),
            Err(Error::EnumerationLimit(_))
        ));
    }
}
