//! Resource ledger of Lo-Popescu dilution: asymptotic against exact.
//!
//! cargo run --release --example lp_ledger

use locc_bounds::lp::{decompose, trace_distance_to_ideal, Mode, TraceDistanceFormula};
use locc_bounds::states::TwoTermState;
use locc_bounds::typical::gamma_from_error_two_term;

fn main() -> locc_bounds::Result<()> {
    let s = TwoTermState::new(0.3)?;
    let gamma = gamma_from_error_two_term(0.005)? * s.alpha();
    println!("gamma for eps_LP1 = 0.005: {gamma:.6}");
    println!(
        "{:>6} {:>12} {:>10} {:>10} {:>10} {:>10}",
        "N", "mode", "d", "cc bits", "ineff", "eps_LP1"
    );
    for n in [256u64, 1024, 4096, 16384] {
        for mode in [Mode::Asymptotic, Mode::ExactFiniteN] {
            let l = decompose(&s, n, gamma, mode)?;
            println!(
                "{n:>6} {:>12} {:>10.2} {:>10.3} {:>10.3} {:>10.2e}",
                mode.to_string(),
                l.d,
                l.cc_cost_bits,
                l.inefficiency_ebits,
                l.eps_lp1
            );
        }
    }
    let l = decompose(&s, 4096, gamma, Mode::ExactFiniteN)?;
    println!(
        "trace distance at N = 4096: 2 eps = {:.4e}, exact pure-state = {:.4e}",
        trace_distance_to_ideal(&l, TraceDistanceFormula::Paper)?,
        trace_distance_to_ideal(&l, TraceDistanceFormula::ExactPureState)?
    );
    Ok(())
}
