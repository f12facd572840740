//! Pure bipartite states as Schmidt probability vectors, with the scalar
//! functionals the bounds are built from: entanglement entropy, the fluctuation
//! coefficient α, and the per-axis coefficients Ωᵢ of the multinomial typical
//! region together with admissible caps Ω_t.
//!
//! All logarithms are base 2 unless a [`LogBase`] says otherwise.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `Σ pᵢ = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Largest Schmidt rank for which the minimax ordering search is exhaustive.
pub const MAX_MINIMAX_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtState {
    probs: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl SchmidtState {
    /// Validates and stores the probabilities in the given order. Nothing is
    /// renormalized: a vector off by more than [`NORMALIZATION_TOL`] is an error.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidState(format!(
                "Schmidt rank {} < 2 (product state)",
                probs.len()
            )));
        }
        if let Some(bad) = probs.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::InvalidState(format!(
                "probability {bad} is not strictly positive"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidState(format!(
                "probabilities sum to {total:.17}, not 1 within {NORMALIZATION_TOL:e}"
            )));
        }
        Ok(Self { probs, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.probs.len()
    }

    /// Ascending-sorted copy of the probabilities.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.probs.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Indices that sort the stored probabilities ascending.
    pub fn ascending_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.rank()).collect();
        idx.sort_by(|&a, &b| self.probs[a].total_cmp(&self.probs[b]));
        idx
    }

    /// Entanglement entropy `−Σ pᵢ log₂ pᵢ` in ebits per copy.
    pub fn entropy(&self) -> f64 {
        -self.probs.iter().map(|&p| p * p.log2()).sum::<f64>()
    }

    /// `α = √(Σ pᵢ (log₂ pᵢ + S)²)`.
    pub fn alpha(&self) -> f64 {
        let s = self.entropy();
        self.probs
            .iter()
            .map(|&p| {
                let d = p.log2() + s;
                p * d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn as_two_term(&self) -> Result<TwoTermState> {
        match self.probs[..] {
            [a, b] => TwoTermState::new(a.min(b)),
            _ => Err(Error::InvalidState(format!(
                "expected a two-term state, got Schmidt rank {}",
                self.rank()
            ))),
        }
    }

    /// `(Ω₁, …, Ω_{m−1})` with the probabilities taken in `ordering`.
    pub fn omega_vector(&self, ordering: &[usize]) -> Result<Vec<f64>> {
        let p = self.permuted(ordering)?;
        omega_vector_of(&p)
    }

    /// Ω vector in the stored order.
    pub fn omega_vector_stored(&self) -> Result<Vec<f64>> {
        omega_vector_of(&self.probs)
    }

    fn permuted(&self, ordering: &[usize]) -> Result<Vec<f64>> {
        let m = self.rank();
        let mut seen = vec![false; m];
        if ordering.len() != m {
            return Err(Error::InvalidState(format!(
                "ordering has {} entries for rank {m}",
                ordering.len()
            )));
        }
        for &i in ordering {
            if i >= m || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidState(format!(
                    "ordering {ordering:?} is not a permutation of 0..{m}"
                )));
            }
        }
        Ok(ordering.iter().map(|&i| self.probs[i]).collect())
    }

    /// A cap `Ω_t` on `|Ωᵢ|` chosen by `strategy`.
    pub fn omega_t(&self, strategy: OmegaStrategy, base: LogBase) -> Result<OmegaT> {
        let ascending = self.ascending_order();
        let ascending_max = max_abs(&self.omega_vector(&ascending)?);
        match strategy {
            OmegaStrategy::SortedPrescription => {
                let value = sorted_prescription(&self.sorted(), base)?;
                Ok(OmegaT {
                    value,
                    strategy,
                    log_base: base,
                    ordering: ascending,
                    max_abs_omega: ascending_max,
                    admissible: value >= ascending_max,
                })
            }
            OmegaStrategy::MinimaxOrdering => {
                let (ordering, max_abs_omega) = self.minimax_ordering()?;
                Ok(OmegaT {
                    value: max_abs_omega,
                    strategy,
                    log_base: LogBase::Two,
                    ordering,
                    max_abs_omega,
                    admissible: true,
                })
            }
            OmegaStrategy::Explicit(value) => {
                if !(value >= ascending_max) {
                    return Err(Error::InvalidState(format!(
                        "explicit Omega_t = {value} is below max |Omega_i| = {ascending_max} \
                         under ascending order"
                    )));
                }
                Ok(OmegaT {
                    value,
                    strategy,
                    log_base: base,
                    ordering: ascending,
                    max_abs_omega: ascending_max,
                    admissible: true,
                })
            }
        }
    }

    /// Ordering minimising `max |Ωᵢ|`, found by exhaustive search.
    pub fn minimax_ordering(&self) -> Result<(Vec<usize>, f64)> {
        let m = self.rank();
        if m > MAX_MINIMAX_RANK {
            return Err(Error::InvalidState(format!(
                "minimax ordering search needs rank <= {MAX_MINIMAX_RANK}, got {m}"
            )));
        }
        let mut best: Option<(Vec<usize>, f64)> = None;
        for ordering in permutations(m) {
            let value = max_abs(&self.omega_vector(&ordering)?);
            if best.as_ref().is_none_or(|(_, b)| value < *b) {
                best = Some((ordering, value));
            }
        }
        Ok(best.expect("rank >= 2 has at least one ordering"))
    }

    /// Ω vectors under every ordering, in lexicographic ordering order.
    pub fn omega_vectors_all(&self) -> Result<Vec<(Vec<usize>, Vec<f64>)>> {
        if self.rank() > MAX_MINIMAX_RANK {
            return Err(Error::InvalidState(format!(
                "enumerating orderings needs rank <= {MAX_MINIMAX_RANK}"
            )));
        }
        permutations(self.rank())
            .into_iter()
            .map(|o| self.omega_vector(&o).map(|w| (o, w)))
            .collect()
    }
}

impl FromStr for SchmidtState {
    type Err = Error;

    /// Accepts `"0.43,0.57"` or a JSON array `"[0.43, 0.57]"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let probs: Vec<f64> = if s.starts_with('[') {
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?
        } else {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
                })
                .collect::<Result<_>>()?
        };
        SchmidtState::new(probs)
    }
}

impl fmt::Display for SchmidtState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.probs.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `√(pᵢ/(πᵢπᵢ₋₁)) Σ_{j>i} pⱼ log₂(pⱼ/pᵢ)` with `πᵢ = 1 − p₁ − … − pᵢ`.
fn omega_vector_of(p: &[f64]) -> Result<Vec<f64>> {
    let m = p.len();
    let mut out = Vec::with_capacity(m - 1);
    let mut pi_prev = 1.0;
    for i in 0..m - 1 {
        let pi_i = pi_prev - p[i];
        if pi_i <= 0.0 {
            return Err(Error::InvalidState(format!(
                "pi_{} = {pi_i} is not positive (rounding underflow)",
                i + 1
            )));
        }
        let tail: f64 = p[i + 1..].iter().map(|&pj| pj * (pj / p[i]).log2()).sum();
        out.push((p[i] / (pi_i * pi_prev)).sqrt() * tail);
        pi_prev = pi_i;
    }
    Ok(out)
}

/// `Ω_t = √(p_{b−1}/(π_{b−1}π_{b−2})) Σ_{i≥2} pᵢ log(pᵢ/p₁)` on ascending probabilities.
fn sorted_prescription(asc: &[f64], base: LogBase) -> Result<f64> {
    let b = asc.len();
    let mut pis = Vec::with_capacity(b);
    let mut pi = 1.0;
    pis.push(pi);
    for &p in asc {
        pi -= p;
        pis.push(pi);
    }
    let (pi_bm1, pi_bm2) = (pis[b - 1], pis[b - 2]);
    if pi_bm1 <= 0.0 {
        return Err(Error::InvalidState(format!(
            "pi_{} = {pi_bm1} is not positive (rounding underflow)",
            b - 1
        )));
    }
    let sum: f64 = asc[1..].iter().map(|&p| p * base.log(p / asc[0])).sum();
    Ok((asc[b - 2] / (pi_bm1 * pi_bm2)).sqrt() * sum)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// All permutations of `0..m` in lexicographic order.
fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..m).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Two-term state `(p, q)` with `p ≤ q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoTermState {
    p: f64,
}

impl TwoTermState {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 0.5 + NORMALIZATION_TOL) {
            return Err(Error::InvalidState(format!(
                "two-term p = {p} must lie in (0, 1/2]"
            )));
        }
        Ok(Self { p: p.min(0.5) })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// `p = q = 1/2`: the target is a singlet and no dilution is needed.
    pub fn is_degenerate(&self) -> bool {
        (self.p - 0.5).abs() <= NORMALIZATION_TOL
    }

    pub fn entropy(&self) -> f64 {
        let (p, q) = (self.p, self.q());
        -p * p.log2() - q * q.log2()
    }

    /// Closed form `√(pq) log₂(q/p)`.
    pub fn alpha(&self) -> f64 {
        (self.p * self.q()).sqrt() * self.log_ratio()
    }

    /// `log₂(q/p)`.
    pub fn log_ratio(&self) -> f64 {
        (self.q() / self.p).log2()
    }

    pub fn to_schmidt(&self) -> SchmidtState {
        SchmidtState {
            probs: vec![self.p, self.q()],
            label: None,
        }
    }

    pub(crate) fn require_non_degenerate(&self, func: &'static str) -> Result<()> {
        if self.is_degenerate() {
            return Err(crate::error::domain(
                func,
                "degenerate state p = q = 1/2: the typical-window inversion is not valid",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum LogBase {
    #[default]
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            _ => Err(Error::Parse(format!("log base {s:?}: expected 2 or e"))),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum OmegaStrategy {
    SortedPrescription,
    MinimaxOrdering,
    Explicit(f64),
}

impl fmt::Display for OmegaStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaStrategy::SortedPrescription => f.write_str("sorted"),
            OmegaStrategy::MinimaxOrdering => f.write_str("minimax"),
            OmegaStrategy::Explicit(v) => write!(f, "explicit({v})"),
        }
    }
}

impl FromStr for OmegaStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sorted" | "sorted-prescription" => Ok(OmegaStrategy::SortedPrescription),
            "minimax" | "minimax-ordering" => Ok(OmegaStrategy::MinimaxOrdering),
            other => other
                .parse::<f64>()
                .map(OmegaStrategy::Explicit)
                .map_err(|_| Error::Parse(format!("omega strategy {other:?}"))),
        }
    }
}

/// A chosen Ω_t with the ordering it was evaluated under.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaT {
    pub value: f64,
    pub strategy: OmegaStrategy,
    pub log_base: LogBase,
    pub ordering: Vec<usize>,
    /// `max |Ωᵢ|` (base 2) under `ordering`.
    pub max_abs_omega: f64,
    /// `value ≥ max |Ωᵢ|`. Can be false for the sorted prescription read with
    /// natural logarithms.
    pub admissible: bool,
}

/// JSON summary of a state.
#[derive(Debug, Clone, Serialize)]
pub struct StateSummary {
    pub probs: Vec<f64>,
    pub entropy: f64,
    pub alpha: f64,
    pub omega_t: f64,
}

impl StateSummary {
    pub fn new(state: &SchmidtState, strategy: OmegaStrategy, base: LogBase) -> Result<Self> {
        Ok(Self {
            probs: state.probs().to_vec(),
            entropy: state.entropy(),
            alpha: state.alpha(),
            omega_t: state.omega_t(strategy, base)?.value,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(p: &[f64]) -> SchmidtState {
        SchmidtState::new(p.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(SchmidtState::new(vec![1.0]).is_err());
        assert!(SchmidtState::new(vec![0.5, 0.4]).is_err());
        assert!(SchmidtState::new(vec![0.0, 1.0]).is_err());
        assert!(SchmidtState::new(vec![-0.1, 1.1]).is_err());
        assert!(SchmidtState::new(vec![0.5, 0.5 + 5e-13]).is_ok());
        assert!(TwoTermState::new(0.6).is_err());
        assert!(TwoTermState::new(0.5).unwrap().is_degenerate());
    }

    #[test]
    fn parse_forms() {
        let a: SchmidtState = "0.43, 0.57".parse().unwrap();
        let b: SchmidtState = "[0.43,0.57]".parse().unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            "0.4,x".parse::<SchmidtState>(),
            Err(Error::Parse(_))
        ));
    }

    // Expected values below come from 40-digit mpmath evaluations.
    #[test]
    fn entropy_values() {
        assert_eq!(st(&[0.5, 0.5]).entropy(), 1.0);
        assert!((st(&[0.43, 0.57]).entropy() - 0.985_815_037_178_919_8).abs() < 1e-14);
        assert!((st(&[0.1, 0.1, 0.8]).entropy() - 0.921_928_094_887_362_3).abs() < 1e-14);
    }

    #[test]
    fn alpha_values() {
        assert_eq!(st(&[0.5, 0.5]).alpha(), 0.0);
        let s = st(&[0.14, 0.86]);
        assert!((s.alpha() - 0.908_727_748_485_348_1).abs() < 1e-13);
        let closed = s.as_two_term().unwrap().alpha();
        assert!((s.alpha() - closed).abs() <= 1e-12 * closed);
        assert!((st(&[0.1, 0.1, 0.8]).alpha() - 1.2).abs() < 1e-13);
    }

    #[test]
    fn omega_vectors() {
        let s = st(&[0.3, 0.3, 0.4]);
        let w = s.omega_vector(&[0, 1, 2]).unwrap();
        assert!((w[0] - 0.108_682_328_953_741_8).abs() < 1e-13);
        assert!((w[1] - 0.171_841_850_452_744_4).abs() < 1e-13);

        let s = st(&[0.4, 0.3, 0.3]);
        let w = s.omega_vector_stored().unwrap();
        assert!((w[0] + 0.203_326_019_470_781_7).abs() < 1e-13);
        assert_eq!(w[1], 0.0);

        let s = st(&[0.3, 0.7]);
        let w = s.omega_vector_stored().unwrap();
        assert_eq!(w.len(), 1);
        assert!((w[0] - s.alpha()).abs() < 1e-12);

        assert!(s.omega_vector(&[0, 0]).is_err());
        assert!(s.omega_vector(&[0]).is_err());
    }

    #[test]
    fn omega_t_strategies() {
        let s = st(&[0.3, 0.3, 0.4]);
        let sorted = s
            .omega_t(OmegaStrategy::SortedPrescription, LogBase::Two)
            .unwrap();
        assert!((sorted.value - 0.171_841_850_452_744_4).abs() < 1e-13);
        assert!(sorted.admissible);

        let natural = s
            .omega_t(OmegaStrategy::SortedPrescription, LogBase::E)
            .unwrap();
        assert!((natural.value - 0.119_111_694_143_523_5).abs() < 1e-13);
        assert!(!natural.admissible);

        // brute force over all 3! orderings, done by hand on the stored vectors
        let brute = s
            .omega_vectors_all()
            .unwrap()
            .into_iter()
            .map(|(_, w)| w.iter().fold(0.0_f64, |a, x| a.max(x.abs())))
            .fold(f64::INFINITY, f64::min);
        let minimax = s
            .omega_t(OmegaStrategy::MinimaxOrdering, LogBase::Two)
            .unwrap();
        assert_eq!(minimax.value, brute);
        assert!((minimax.value - 0.171_841_850_452_744_4).abs() < 1e-13);

        assert!(s
            .omega_t(OmegaStrategy::Explicit(0.1), LogBase::Two)
            .is_err());
        assert_eq!(
            s.omega_t(OmegaStrategy::Explicit(0.5), LogBase::Two)
                .unwrap()
                .value,
            0.5
        );
    }

    #[test]
    fn omega_t_two_term_is_alpha() {
        let s = st(&[0.7, 0.3]);
        for strategy in [
            OmegaStrategy::SortedPrescription,
            OmegaStrategy::MinimaxOrdering,
        ] {
            let v = s.omega_t(strategy, LogBase::Two).unwrap().value;
            assert!((v - s.alpha()).abs() < 1e-12);
        }
    }

    #[test]
    fn minimax_rank_limit() {
        let s = SchmidtState::new(vec![0.1; 10]).unwrap();
        assert!(s
            .omega_t(OmegaStrategy::MinimaxOrdering, LogBase::Two)
            .is_err());
        assert!(s
            .omega_t(OmegaStrategy::SortedPrescription, LogBase::Two)
            .is_ok());
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(2), vec![vec![0, 1], vec![1, 0]]);
    }
}
