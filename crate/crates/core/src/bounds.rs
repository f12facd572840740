//! Lower bounds on classical communication and inefficiency for converting
//! copies of ψ₁ into copies of ψ₂.
//!
//! The argument runs a two-stage dilution: singlets → ψ₁ by Lo-Popescu, then
//! ψ₁ → ψ₂ by an unknown protocol. The known singlet-dilution bound
//! `α_{ψ₂}√N` applies to the whole chain, so whatever the first stage does not
//! pay for, the second stage must. Each bound is a coefficient on `√N`.
//!
//! Error accounting: the total trace-distance allowance (default 0.01) is split
//! as `ε₁ + ε₂`, where `ε₂` belongs to the unknown protocol and `ε₁ = total − ε₂`
//! to Lo-Popescu. The states σ, Λ, Λ′, ρ, ρ′, ρ″ of that split are never
//! constructed; only the scalar budget is.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::TraceDistanceFormula;
use crate::special::lambert_w0;
use crate::states::{LogBase, OmegaStrategy, SchmidtState, TwoTermState};
use crate::typical::{gamma_from_error_general, gamma_from_error_two_term};

/// Total error allowance of the singlet-dilution lower bound.
pub const DEFAULT_TOTAL_ERROR: f64 = 0.01;

/// `ε₂` closer than this to the total allowance is rejected.
pub const BOUNDARY_EXCLUSION: f64 = 1e-9;

/// Inefficiency constant as printed alongside the halving statement.
pub const PRINTED_INEFF_CONSTANT: f64 = 2.64;

/// Printed values for the (0.3,0.3,0.4) → (0.1,0.1,0.8) example.
pub const PRINTED_THREE_TERM_CC: f64 = 0.29;
pub const PRINTED_THREE_TERM_INEFF: f64 = 0.87;

/// Split of the total trace-distance allowance between the two stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorBudget {
    pub eps_total: f64,
    pub eps2: f64,
    pub eps1: f64,
    /// Largest atypical weight the Lo-Popescu stage may leave.
    pub eps_lp1_max: f64,
    pub trace_distance: TraceDistanceFormula,
}

impl ErrorBudget {
    /// Default total allowance, linear trace-distance relation `2ε_LP1 ≤ ε₁`.
    pub fn new(eps2: f64) -> Result<Self> {
        Self::with_total(DEFAULT_TOTAL_ERROR, eps2, TraceDistanceFormula::Paper)
    }

    pub fn with_total(
        eps_total: f64,
        eps2: f64,
        trace_distance: TraceDistanceFormula,
    ) -> Result<Self> {
        if !(eps_total > 0.0 && eps_total.is_finite()) {
            return Err(Error::Budget(format!(
                "total error {eps_total} must be > 0"
            )));
        }
        if !(eps2 >= 0.0) {
            return Err(Error::Budget(format!("eps2 = {eps2} must be >= 0")));
        }
        if eps2 >= eps_total - BOUNDARY_EXCLUSION {
            return Err(Error::Budget(format!(
                "eps2 = {eps2} leaves no allowance for the Lo-Popescu stage (total {eps_total})"
            )));
        }
        let eps1 = eps_total - eps2;
        let eps_lp1_max = match trace_distance {
            TraceDistanceFormula::Paper => 0.5 * eps1,
            // 2√ε_LP1 ≤ ε₁
            TraceDistanceFormula::ExactPureState => 0.25 * eps1 * eps1,
        };
        Ok(Self {
            eps_total,
            eps2,
            eps1,
            eps_lp1_max,
            trace_distance,
        })
    }

    pub fn is_default_total(&self) -> bool {
        self.eps_total == DEFAULT_TOTAL_ERROR
    }

    /// Largest `γ/α` for a two-term first-stage state.
    pub fn gamma_ratio(&self) -> Result<f64> {
        gamma_from_error_two_term(self.eps_lp1_max)
    }

    /// Largest `γ/Ω_t` for a first-stage state of Schmidt rank `b`.
    pub fn gamma_ratio_general(&self, b: usize) -> Result<f64> {
        gamma_from_error_general(self.eps_lp1_max, b)
    }
}

/// `√W(8/(π(0.01 − ε₂)²))`, the Fig.-3 curve.
pub fn gamma_ratio_budget(eps2: f64) -> Result<f64> {
    gamma_ratio_budget_with_total(DEFAULT_TOTAL_ERROR, eps2)
}

pub fn gamma_ratio_budget_with_total(eps_total: f64, eps2: f64) -> Result<f64> {
    let b = ErrorBudget::with_total(eps_total, eps2, TraceDistanceFormula::Paper)?;
    let w = lambert_w0(8.0 / (std::f64::consts::PI * b.eps1 * b.eps1))?;
    Ok(w.sqrt())
}

/// Singlet-dilution lower bounds for `N` copies of ψ at success probability `2^{−s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingletBounds {
    /// Minimum singlets consumed, `NS + α√N`.
    pub p_min: f64,
    /// Minimum bits of communication, `α√N − s` floored at zero.
    pub c_min: f64,
    pub c_raw: f64,
    pub vacuous: bool,
}

pub fn singlet_dilution_bounds(
    psi: &SchmidtState,
    n: u64,
    success_exponent: f64,
) -> Result<SingletBounds> {
    if !(success_exponent >= 0.0) {
        return Err(Error::Budget(format!(
            "success exponent s = {success_exponent} must be >= 0"
        )));
    }
    let rt = (n as f64).sqrt();
    let c_raw = psi.alpha() * rt - success_exponent;
    Ok(SingletBounds {
        p_min: n as f64 * psi.entropy() + psi.alpha() * rt,
        c_min: c_raw.max(0.0),
        c_raw,
        vacuous: c_raw <= 0.0,
    })
}

/// Upper bound on the Lo-Popescu stage communication for producing
/// `NS(ψ₂)/S(ψ₁)` copies of ψ₁: `2·√W(…)·α₁·√(N S₂/S₁)` bits.
pub fn lp_stage_cc_budget(
    psi1: &TwoTermState,
    psi2: &SchmidtState,
    budget: &ErrorBudget,
    n: u64,
) -> Result<f64> {
    let ratio = budget.gamma_ratio()?;
    Ok(2.0 * ratio * psi1.alpha() * (n as f64 * psi2.entropy() / psi1.entropy()).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Claim {
    /// Communication, two-term ψ₁.
    #[serde(rename = "3")]
    CcTwoTerm,
    /// Inefficiency, two-term ψ₁.
    #[serde(rename = "4")]
    IneffTwoTerm,
    /// Communication, general ψ₁.
    #[serde(rename = "5")]
    CcGeneral,
    /// Inefficiency, general ψ₁.
    #[serde(rename = "6")]
    IneffGeneral,
}

impl Claim {
    pub fn number(self) -> u8 {
        match self {
            Claim::CcTwoTerm => 3,
            Claim::IneffTwoTerm => 4,
            Claim::CcGeneral => 5,
            Claim::IneffGeneral => 6,
        }
    }

    /// 2 for communication bounds, 1 for inefficiency bounds.
    pub fn multiplier(self) -> f64 {
        match self {
            Claim::CcTwoTerm | Claim::CcGeneral => 2.0,
            Claim::IneffTwoTerm | Claim::IneffGeneral => 1.0,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Claim::CcTwoTerm | Claim::CcGeneral => "bits",
            Claim::IneffTwoTerm | Claim::IneffGeneral => "ebits",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundInputs {
    pub psi1: Vec<f64>,
    pub psi2: Vec<f64>,
    pub eps2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundProvenance {
    pub omega_strategy: Option<OmegaStrategy>,
    pub omega_log_base: Option<LogBase>,
    pub trace_distance_mode: TraceDistanceFormula,
    pub total_error: f64,
    /// Set when the total allowance differs from 0.01.
    pub non_default_total_error: bool,
    /// `√W(…)` used for the subtracted term.
    pub gamma_ratio: f64,
    /// α₁ for two-term ψ₁, Ω_t for general ψ₁.
    pub fluctuation: f64,
    /// Schmidt rank of ψ₁.
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_admissible: Option<bool>,
}

/// A lower bound `coefficient · √N`. The raw coefficient is kept even when it
/// is non-positive; `display_coefficient` is the clamped value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConversionBound {
    pub claim: Claim,
    pub coefficient: f64,
    pub vacuous: bool,
    pub display_coefficient: f64,
    pub unit: &'static str,
    /// The term subtracted from α₂.
    pub subtracted: f64,
    pub inputs: BoundInputs,
    pub provenance: BoundProvenance,
}

fn build_bound(
    claim: Claim,
    psi1: &SchmidtState,
    psi2: &SchmidtState,
    budget: &ErrorBudget,
    gamma_ratio: f64,
    fluctuation: f64,
    omega: Option<(OmegaStrategy, LogBase, bool)>,
) -> ConversionBound {
    let subtracted =
        claim.multiplier() * gamma_ratio * fluctuation * (psi2.entropy() / psi1.entropy()).sqrt();
    let coefficient = psi2.alpha() - subtracted;
    ConversionBound {
        claim,
        coefficient,
        vacuous: coefficient <= 0.0,
        display_coefficient: coefficient.max(0.0),
        unit: claim.unit(),
        subtracted,
        inputs: BoundInputs {
            psi1: psi1.probs().to_vec(),
            psi2: psi2.probs().to_vec(),
            eps2: budget.eps2,
        },
        provenance: BoundProvenance {
            omega_strategy: omega.map(|o| o.0),
            omega_log_base: omega.map(|o| o.1),
            trace_distance_mode: budget.trace_distance,
            total_error: budget.eps_total,
            non_default_total_error: !budget.is_default_total(),
            gamma_ratio,
            fluctuation,
            rank: psi1.rank(),
            omega_admissible: omega.map(|o| o.2),
        },
    }
}

fn two_term_bound(
    claim: Claim,
    psi1: &TwoTermState,
    psi2: &SchmidtState,
    budget: &ErrorBudget,
) -> Result<ConversionBound> {
    psi1.require_non_degenerate("two-term conversion bound")?;
    let ratio = budget.gamma_ratio()?;
    Ok(build_bound(
        claim,
        &psi1.to_schmidt(),
        psi2,
        budget,
        ratio,
        psi1.alpha(),
        None,
    ))
}

/// `(α₂ − 2√W(…) α₁ √(S₂/S₁))` bits per `√N`.
pub fn cc_lower_bound_two_term(
    psi1: &TwoTermState,
    psi2: &SchmidtState,
    budget: &ErrorBudget,
) -> Result<ConversionBound> {
    two_term_bound(Claim::CcTwoTerm, psi1, psi2, budget)
}

/// `(α₂ − √W(…) α₁ √(S₂/S₁))` ebits per `√N`.
pub fn ineff_lower_bound_two_term(
    psi1: &TwoTermState,
    psi2: &SchmidtState,
    budget: &ErrorBudget,
) -> Result<ConversionBound> {
    two_term_bound(Claim::IneffTwoTerm, psi1, psi2, budget)
}

fn general_bound(
    claim: Claim,
    psi1: &SchmidtState,
    psi2: &SchmidtState,
    budget: &ErrorBudget,
    strategy: OmegaStrategy,
    base: LogBase,
) -> Result<ConversionBound> {
    let omega_t = psi1.omega_t(strategy, base)?;
    let ratio = budget.gamma_ratio_general(psi1.rank())?;
    Ok(build_bound(
        claim,
        psi1,
        psi2,
        budget,
        ratio,
        omega_t.value,
        Some((strategy, omega_t.log_base, omega_t.admissible)),
    ))
}

/// Communication bound for a first-stage state of any Schmidt rank `b`:
/// `(α₂ − 2√W(1/(2π((total − ε₂)/4)^{2/(b−1)})) Ω_t √(S₂/S₁))`.
pub fn cc_lower_bound_general(
    psi1: &SchmidtState,
    psi2: &SchmidtState,
    budget: &ErrorBudget,
    strategy: OmegaStrategy,
    base: LogBase,
) -> Result<ConversionBound> {
    general_bound(Claim::CcGeneral, psi1, psi2, budget, strategy, base)
}

pub fn ineff_lower_bound_general(
    psi1: &SchmidtState,
    psi2: &SchmidtState,
    budget: &ErrorBudget,
    strategy: OmegaStrategy,
    base: LogBase,
) -> Result<ConversionBound> {
    general_bound(Claim::IneffGeneral, psi1, psi2, budget, strategy, base)
}

/// Whether the communication bound is non-vacuous (coefficient strictly positive).
pub fn nonzero_cc_predicate(
    psi1: &TwoTermState,
    psi2: &SchmidtState,
    budget: &ErrorBudget,
) -> Result<bool> {
    Ok(!cc_lower_bound_two_term(psi1, psi2, budget)?.vacuous)
}

/// Whether the inefficiency bound is non-vacuous.
pub fn nonzero_ineff_predicate(
    psi1: &TwoTermState,
    psi2: &SchmidtState,
    budget: &ErrorBudget,
) -> Result<bool> {
    Ok(!ineff_lower_bound_two_term(psi1, psi2, budget)?.vacuous)
}

/// The threshold test written with `α/S` on both sides,
/// `α₂/S₂ ≥ k·√W(…)·α₁/S₁`. The coefficient sign is equivalent to the same
/// test with `α/√S`, so the two can disagree; both are reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdComparison {
    /// `α₂/S₂`.
    pub lhs: f64,
    /// `k·√W(…)·α₁/S₁`.
    pub rhs: f64,
    pub printed_form_holds: bool,
    /// Coefficient sign (the predicate actually returned).
    pub coefficient_positive: bool,
    pub agree: bool,
}

pub fn threshold_comparison(
    claim: Claim,
    psi1: &TwoTermState,
    psi2: &SchmidtState,
    budget: &ErrorBudget,
) -> Result<ThresholdComparison> {
    let bound = two_term_bound(claim, psi1, psi2, budget)?;
    let lhs = psi2.alpha() / psi2.entropy();
    let rhs = claim.multiplier() * bound.provenance.gamma_ratio * psi1.alpha() / psi1.entropy();
    let printed = lhs >= rhs;
    Ok(ThresholdComparison {
        lhs,
        rhs,
        printed_form_holds: printed,
        coefficient_positive: !bound.vacuous,
        agree: printed == !bound.vacuous,
    })
}

/// The ε₂ = 0 constants and their two-decimal renderings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantReport {
    /// `2√W(8/(π·total²))`.
    pub cc_constant: f64,
    pub cc_constant_2dp: String,
    /// `√W(8/(π·total²))`, half the communication constant.
    pub ineff_constant: f64,
    pub ineff_constant_2dp: String,
    pub printed_ineff_constant: f64,
    pub note: String,
}

pub fn constant_report(eps_total: f64) -> Result<ConstantReport> {
    let ineff = gamma_ratio_budget_with_total(eps_total, 0.0)?;
    let cc = 2.0 * ineff;
    Ok(ConstantReport {
        cc_constant: cc,
        cc_constant_2dp: format!("{cc:.2}"),
        ineff_constant: ineff,
        ineff_constant_2dp: format!("{ineff:.2}"),
        printed_ineff_constant: PRINTED_INEFF_CONSTANT,
        note: format!(
            "inefficiency constant computed as {ineff:.4} = {cc:.4}/2; the printed value \
             {PRINTED_INEFF_CONSTANT} is inconsistent with halving the communication constant"
        ),
    })
}

/// Computed coefficients for a general-state example next to printed values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrintedComparison {
    pub cc: ConversionBound,
    pub ineff: ConversionBound,
    pub printed_cc: f64,
    pub printed_ineff: f64,
    pub delta_cc: f64,
    pub delta_ineff: f64,
}

/// Claims 5/6 for (0.3,0.3,0.4) → (0.1,0.1,0.8) against the printed 0.29 and 0.87.
pub fn three_term_example(
    budget: &ErrorBudget,
    strategy: OmegaStrategy,
    base: LogBase,
) -> Result<PrintedComparison> {
    let psi1 = SchmidtState::new(vec![0.3, 0.3, 0.4])?;
    let psi2 = SchmidtState::new(vec![0.1, 0.1, 0.8])?;
    let cc = cc_lower_bound_general(&psi1, &psi2, budget, strategy, base)?;
    let ineff = ineff_lower_bound_general(&psi1, &psi2, budget, strategy, base)?;
    Ok(PrintedComparison {
        delta_cc: cc.coefficient - PRINTED_THREE_TERM_CC,
        delta_ineff: ineff.coefficient - PRINTED_THREE_TERM_INEFF,
        cc,
        ineff,
        printed_cc: PRINTED_THREE_TERM_CC,
        printed_ineff: PRINTED_THREE_TERM_INEFF,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(p: &[f64]) -> SchmidtState {
        SchmidtState::new(p.to_vec()).unwrap()
    }

    fn tt(p: f64) -> TwoTermState {
        TwoTermState::new(p).unwrap()
    }

    // Expected values from 40-digit mpmath evaluation of the same expressions.

    #[test]
    fn budget_validation() {
        assert!(ErrorBudget::new(-1e-3).is_err());
        assert!(ErrorBudget::new(0.01).is_err());
        assert!(ErrorBudget::new(0.01 - 5e-10).is_err());
        let b = ErrorBudget::new(0.004).unwrap();
        assert!((b.eps1 - 0.006).abs() < 1e-15);
        assert!((b.eps_lp1_max - 0.003).abs() < 1e-15);
        let b = ErrorBudget::with_total(0.01, 0.0, TraceDistanceFormula::ExactPureState).unwrap();
        assert!((b.eps_lp1_max - 2.5e-5).abs() < 1e-18);
    }

    #[test]
    fn gamma_ratio_values() {
        assert!((gamma_ratio_budget(0.0).unwrap() - 2.838_722_240_166_151).abs() < 1e-12);
        assert!((gamma_ratio_budget(0.005).unwrap() - 3.049_787_316_686_012).abs() < 1e-12);
        let b = ErrorBudget::new(0.003).unwrap();
        assert!((gamma_ratio_budget(0.003).unwrap() - b.gamma_ratio().unwrap()).abs() < 1e-12);
        assert!(gamma_ratio_budget(0.01).is_err());
    }

    #[test]
    fn singlet_bounds() {
        let b = singlet_dilution_bounds(&st(&[0.5, 0.5]), 100, 0.0).unwrap();
        assert_eq!((b.p_min, b.c_min), (100.0, 0.0));
        assert!(b.vacuous);
        let b = singlet_dilution_bounds(&st(&[0.14, 0.86]), 10_000, 0.0).unwrap();
        assert!((b.p_min - (5842.388_116_428_559 + 90.872_774_848_534_81)).abs() < 1e-8);
        assert!((b.c_min - 90.872_774_848_534_81).abs() < 1e-9);
        let s = 90.872_774_848_534_81;
        let b = singlet_dilution_bounds(&st(&[0.14, 0.86]), 10_000, s + 1e-9).unwrap();
        assert_eq!(b.c_min, 0.0);
        assert!(singlet_dilution_bounds(&st(&[0.14, 0.86]), 1, -1.0).is_err());
    }

    #[test]
    fn lp_stage_budget() {
        let b = ErrorBudget::new(0.0).unwrap();
        let v = lp_stage_cc_budget(&tt(0.14), &st(&[0.14, 0.86]), &b, 10_000).unwrap();
        assert!((v - 515.925_133_976_294).abs() < 1e-8);
        let v4 = lp_stage_cc_budget(&tt(0.14), &st(&[0.14, 0.86]), &b, 40_000).unwrap();
        assert!((v4 - 2.0 * v).abs() < 1e-9);
    }

    #[test]
    fn claim3_and_claim4_examples() {
        let b = ErrorBudget::new(0.0).unwrap();
        let cc = cc_lower_bound_two_term(&tt(0.43), &st(&[0.14, 0.86]), &b).unwrap();
        assert!((cc.coefficient - 0.028_862_048_309_735_67).abs() < 1e-11);
        assert!(!cc.vacuous);
        let cc = cc_lower_bound_two_term(&tt(0.43), &st(&[0.3, 0.7]), &b).unwrap();
        assert!((cc.coefficient + 0.520_468_896_253_148_4).abs() < 1e-11);
        assert!(cc.vacuous && cc.display_coefficient == 0.0);
        let ie = ineff_lower_bound_two_term(&tt(0.43), &st(&[0.3, 0.7]), &b).unwrap();
        assert!((ie.coefficient - 0.019_850_841_859_157_06).abs() < 1e-11);
        assert!(!ie.vacuous);
    }

    #[test]
    fn claim5_and_claim6_example() {
        let b = ErrorBudget::new(0.0).unwrap();
        let r = three_term_example(&b, OmegaStrategy::SortedPrescription, LogBase::Two).unwrap();
        assert!((r.cc.coefficient - 0.740_848_551_114_339_7).abs() < 1e-11);
        assert!((r.ineff.coefficient - 0.970_424_275_557_169_9).abs() < 1e-11);
        let r = three_term_example(&b, OmegaStrategy::SortedPrescription, LogBase::E).unwrap();
        assert!((r.cc.coefficient - 0.881_740_467_754_890_7).abs() < 1e-11);
        assert!((r.ineff.coefficient - 1.040_870_233_877_445_4).abs() < 1e-11);
        assert_eq!(r.cc.provenance.omega_admissible, Some(false));
    }

    #[test]
    fn self_conversion_is_vacuous() {
        let b = ErrorBudget::new(0.0).unwrap();
        let s = tt(0.2);
        assert!(
            cc_lower_bound_two_term(&s, &s.to_schmidt(), &b)
                .unwrap()
                .vacuous
        );
        assert!(
            ineff_lower_bound_two_term(&s, &s.to_schmidt(), &b)
                .unwrap()
                .vacuous
        );
    }

    #[test]
    fn predicates_and_printed_threshold() {
        let b = ErrorBudget::new(0.0).unwrap();
        let (p1, a, c) = (tt(0.43), st(&[0.14, 0.86]), st(&[0.3, 0.7]));
        assert!(nonzero_cc_predicate(&p1, &a, &b).unwrap());
        assert!(nonzero_ineff_predicate(&p1, &c, &b).unwrap());
        assert!(!nonzero_cc_predicate(&p1, &c, &b).unwrap());
        assert!(nonzero_ineff_predicate(&p1, &a, &b).unwrap());
        let t = threshold_comparison(Claim::CcTwoTerm, &p1, &c, &b).unwrap();
        // 0.6356 < 1.1594
        assert!((t.lhs - 0.635_625_059_172_236_5).abs() < 1e-12);
        assert!((t.rhs - 1.159_373_759_426_055_9).abs() < 1e-12);
        assert!(t.agree && !t.printed_form_holds);
    }

    #[test]
    fn constants() {
        let r = constant_report(DEFAULT_TOTAL_ERROR).unwrap();
        assert!((r.cc_constant - 5.677_444_480_332_302).abs() < 1e-11);
        assert_eq!(r.cc_constant_2dp, "5.68");
        assert_eq!(r.ineff_constant_2dp, "2.84");
        assert!(r.note.contains("2.64"));
    }

    #[test]
    fn rejects_degenerate_first_stage() {
        let b = ErrorBudget::new(0.0).unwrap();
        assert!(cc_lower_bound_two_term(&tt(0.5), &st(&[0.3, 0.7]), &b).is_err());
    }
}
