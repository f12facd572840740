//! Grid evaluation of the bounds for plotting.

use std::fmt;
use std::str::FromStr;

use crate::bounds::{
    cc_lower_bound_general, cc_lower_bound_two_term, gamma_ratio_budget_with_total,
    ineff_lower_bound_general, ineff_lower_bound_two_term, ConversionBound, ErrorBudget,
    BOUNDARY_EXCLUSION, DEFAULT_TOTAL_ERROR,
};
use crate::error::{Error, Result};
use crate::lp::TraceDistanceFormula;
use crate::output::{Cell, Table};
use crate::states::{LogBase, OmegaStrategy, SchmidtState};
use crate::typical::{atypical_weight_exact, atypical_weight_gaussian, typical_window};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepQuantity {
    GammaRatio,
    CcCoefficient,
    IneffCoefficient,
    AtypicalWeight,
}

impl FromStr for SweepQuantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma-ratio" => Ok(Self::GammaRatio),
            "cc-coefficient" => Ok(Self::CcCoefficient),
            "ineff-coefficient" => Ok(Self::IneffCoefficient),
            "atypical-weight" => Ok(Self::AtypicalWeight),
            _ => Err(Error::Parse(format!(
                "quantity {s:?}: expected gamma-ratio, cc-coefficient, ineff-coefficient or atypical-weight"
            ))),
        }
    }
}

impl fmt::Display for SweepQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::GammaRatio => "gamma-ratio",
            Self::CcCoefficient => "cc-coefficient",
            Self::IneffCoefficient => "ineff-coefficient",
            Self::AtypicalWeight => "atypical-weight",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub quantity: SweepQuantity,
    pub eps2_start: f64,
    pub eps2_end: f64,
    /// Number of ε₂ points, endpoints included.
    pub eps2_steps: usize,
    /// Block sizes (atypical-weight sweeps only).
    pub n_values: Vec<u64>,
    pub pairs: Vec<(SchmidtState, SchmidtState)>,
    pub total_error: f64,
    pub trace_distance: TraceDistanceFormula,
    pub omega_strategy: OmegaStrategy,
    pub omega_log_base: LogBase,
}

impl SweepSpec {
    /// ε₂ ∈ [0, 0.0099] in 100 points.
    pub fn gamma_ratio_default() -> Self {
        Self {
            quantity: SweepQuantity::GammaRatio,
            eps2_start: 0.0,
            eps2_end: 0.0099,
            eps2_steps: 100,
            n_values: Vec::new(),
            pairs: Vec::new(),
            total_error: DEFAULT_TOTAL_ERROR,
            trace_distance: TraceDistanceFormula::Paper,
            omega_strategy: OmegaStrategy::SortedPrescription,
            omega_log_base: LogBase::Two,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parse(format!("sweep spec: {msg}")));
        if self.eps2_steps == 0 {
            return bad("eps2 axis is empty".into());
        }
        if !(self.eps2_start >= 0.0 && self.eps2_start <= self.eps2_end) {
            return bad(format!(
                "eps2 range [{}, {}] must satisfy 0 <= start <= end",
                self.eps2_start, self.eps2_end
            ));
        }
        if self.eps2_end >= self.total_error - BOUNDARY_EXCLUSION {
            return bad(format!(
                "eps2 end {} must stay below the total error {}",
                self.eps2_end, self.total_error
            ));
        }
        match self.quantity {
            SweepQuantity::GammaRatio => {}
            SweepQuantity::CcCoefficient | SweepQuantity::IneffCoefficient => {
                if self.pairs.is_empty() {
                    return bad("no state pairs given".into());
                }
            }
            SweepQuantity::AtypicalWeight => {
                if self.pairs.is_empty() || self.n_values.is_empty() {
                    return bad("atypical-weight needs at least one state and one N".into());
                }
            }
        }
        Ok(())
    }

    pub fn eps2_grid(&self) -> Vec<f64> {
        if self.eps2_steps == 1 {
            return vec![self.eps2_start];
        }
        let span = self.eps2_end - self.eps2_start;
        (0..self.eps2_steps)
            .map(|i| self.eps2_start + span * i as f64 / (self.eps2_steps - 1) as f64)
            .collect()
    }

    fn budget(&self, eps2: f64) -> Result<ErrorBudget> {
        ErrorBudget::with_total(self.total_error, eps2, self.trace_distance)
    }
}

fn probs_text(s: &SchmidtState) -> String {
    s.probs()
        .iter()
        .map(|p| format!("{p:?}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn bound_for(
    spec: &SweepSpec,
    psi1: &SchmidtState,
    psi2: &SchmidtState,
    eps2: f64,
) -> Result<ConversionBound> {
    let budget = spec.budget(eps2)?;
    let cc = spec.quantity == SweepQuantity::CcCoefficient;
    if psi1.rank() == 2 {
        let t = psi1.as_two_term()?;
        if cc {
            cc_lower_bound_two_term(&t, psi2, &budget)
        } else {
            ineff_lower_bound_two_term(&t, psi2, &budget)
        }
    } else if cc {
        cc_lower_bound_general(
            psi1,
            psi2,
            &budget,
            spec.omega_strategy,
            spec.omega_log_base,
        )
    } else {
        ineff_lower_bound_general(
            psi1,
            psi2,
            &budget,
            spec.omega_strategy,
            spec.omega_log_base,
        )
    }
}

/// Rows are ordered by (pair, N, ε₂), the nesting order of the grid.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table> {
    spec.validate()?;
    let grid = spec.eps2_grid();
    let total = Cell::Num(spec.total_error);
    let td = Cell::Text(spec.trace_distance.to_string());
    match spec.quantity {
        SweepQuantity::GammaRatio => {
            let mut t = Table::new(["eps2", "gamma_ratio", "total_error", "trace_distance"]);
            for &eps2 in &grid {
                let value = if spec.trace_distance == TraceDistanceFormula::Paper {
                    gamma_ratio_budget_with_total(spec.total_error, eps2)?
                } else {
                    spec.budget(eps2)?.gamma_ratio()?
                };
                t.push(vec![
                    Cell::Num(eps2),
                    Cell::Num(value),
                    total.clone(),
                    td.clone(),
                ]);
            }
            Ok(t)
        }
        SweepQuantity::CcCoefficient | SweepQuantity::IneffCoefficient => {
            let mut t = Table::new([
                "pair",
                "psi1",
                "psi2",
                "eps2",
                "claim",
                "coefficient",
                "vacuous",
                "gamma_ratio",
                "fluctuation",
                "total_error",
                "trace_distance",
                "omega_strategy",
                "omega_log_base",
            ]);
            for (i, (psi1, psi2)) in spec.pairs.iter().enumerate() {
                for &eps2 in &grid {
                    let b = bound_for(spec, psi1, psi2, eps2)?;
                    let (strategy, base) =
                        match (b.provenance.omega_strategy, b.provenance.omega_log_base) {
                            (Some(s), Some(l)) => (s.to_string(), l.to_string()),
                            _ => ("none".to_string(), "2".to_string()),
                        };
                    t.push(vec![
                        Cell::Int(i as u64),
                        Cell::Text(probs_text(psi1)),
                        Cell::Text(probs_text(psi2)),
                        Cell::Num(eps2),
                        Cell::Int(b.claim.number() as u64),
                        Cell::Num(b.coefficient),
                        Cell::Bool(b.vacuous),
                        Cell::Num(b.provenance.gamma_ratio),
                        Cell::Num(b.provenance.fluctuation),
                        total.clone(),
                        td.clone(),
                        Cell::Text(strategy),
                        Cell::Text(base),
                    ]);
                }
            }
            Ok(t)
        }
        SweepQuantity::AtypicalWeight => {
            let mut t = Table::new([
                "state",
                "p",
                "n",
                "eps2",
                "gamma_over_alpha",
                "gamma",
                "exact",
                "gaussian",
                "ratio",
                "total_error",
                "trace_distance",
            ]);
            for (i, (psi1, _)) in spec.pairs.iter().enumerate() {
                let s = psi1.as_two_term()?;
                for &n in &spec.n_values {
                    for &eps2 in &grid {
                        let x = spec.budget(eps2)?.gamma_ratio()?;
                        let gamma = x * s.alpha();
                        let w = typical_window(&s, gamma, n)?;
                        let exact = atypical_weight_exact(&s, &w)?;
                        let gauss = atypical_weight_gaussian(x)?;
                        t.push(vec![
                            Cell::Int(i as u64),
                            Cell::Num(s.p()),
                            Cell::Int(n),
                            Cell::Num(eps2),
                            Cell::Num(x),
                            Cell::Num(gamma),
                            Cell::Num(exact),
                            Cell::Num(gauss),
                            Cell::Num(exact / gauss),
                            total.clone(),
                            td.clone(),
                        ]);
                    }
                }
            }
            Ok(t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_ratio_sweep_is_monotone() {
        let t = run_sweep(&SweepSpec::gamma_ratio_default()).unwrap();
        assert_eq!(t.rows.len(), 100);
        let vals: Vec<f64> = t
            .rows
            .iter()
            .map(|r| match r[1] {
                Cell::Num(v) => v,
                _ => unreachable!(),
            })
            .collect();
        assert!((vals[0] - 2.838_722_240_166_151).abs() < 1e-12);
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn spec_validation() {
        let mut s = SweepSpec::gamma_ratio_default();
        s.eps2_end = 0.01;
        assert!(s.validate().is_err());
        s.eps2_end = 0.005;
        s.eps2_steps = 0;
        assert!(s.validate().is_err());
        s.eps2_steps = 3;
        s.quantity = SweepQuantity::CcCoefficient;
        assert!(s.validate().is_err());
        assert_eq!(
            SweepSpec {
                eps2_steps: 3,
                ..SweepSpec::gamma_ratio_default()
            }
            .eps2_grid()
            .len(),
            3
        );
    }
}
