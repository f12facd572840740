//! Lower bounds on communication and inefficiency for converting one
//! partially entangled state into another.
//!
//! cargo run --example conversion_bounds

use locc_bounds::bounds::{
    cc_lower_bound_two_term, constant_report, ineff_lower_bound_two_term, three_term_example,
    threshold_comparison, Claim, ErrorBudget,
};
use locc_bounds::states::{LogBase, OmegaStrategy, SchmidtState, TwoTermState};

fn main() -> locc_bounds::Result<()> {
    let budget = ErrorBudget::new(0.0)?;
    let psi1 = TwoTermState::new(0.43)?;
    for target in ["0.14,0.86", "0.3,0.7"] {
        let psi2: SchmidtState = target.parse()?;
        let cc = cc_lower_bound_two_term(&psi1, &psi2, &budget)?;
        let ineff = ineff_lower_bound_two_term(&psi1, &psi2, &budget)?;
        let t = threshold_comparison(Claim::CcTwoTerm, &psi1, &psi2, &budget)?;
        println!(
            "(0.43,0.57) -> ({target}): cc {:+.6} sqrt(N) bits{}, ineff {:+.6} sqrt(N) ebits{}",
            cc.coefficient,
            if cc.vacuous { " (vacuous)" } else { "" },
            ineff.coefficient,
            if ineff.vacuous { " (vacuous)" } else { "" },
        );
        println!(
            "  alpha/S test {} vs coefficient sign {}",
            t.printed_form_holds, t.coefficient_positive
        );
    }

    let r = constant_report(0.01)?;
    println!(
        "constants: cc {} ({:.6}), ineff {} ({:.6})",
        r.cc_constant_2dp, r.cc_constant, r.ineff_constant_2dp, r.ineff_constant
    );
    println!("  {}", r.note);

    for base in [LogBase::Two, LogBase::E] {
        let ex = three_term_example(&budget, OmegaStrategy::SortedPrescription, base)?;
        println!(
            "(0.3,0.3,0.4) -> (0.1,0.1,0.8), log base {base}: cc {:.4} (printed {}), ineff {:.4} (printed {})",
            ex.cc.coefficient, ex.printed_cc, ex.ineff.coefficient, ex.printed_ineff
        );
    }
    Ok(())
}
