//! Entropy, fluctuation α and the Ω quantities for a few Schmidt vectors.
//!
//! cargo run --example state_analysis

use locc_bounds::states::{LogBase, OmegaStrategy, SchmidtState};

fn main() -> locc_bounds::Result<()> {
    for text in ["0.43,0.57", "0.14,0.86", "0.3,0.3,0.4", "0.1,0.1,0.8"] {
        let s: SchmidtState = text.parse()?;
        println!("{s}");
        println!("  S = {:.6} ebits, alpha = {:.6}", s.entropy(), s.alpha());
        if s.rank() > 2 {
            for base in [LogBase::Two, LogBase::E] {
                let t = s.omega_t(OmegaStrategy::SortedPrescription, base)?;
                println!(
                    "  Omega_t sorted (log base {base}) = {:.6}  ordering {:?}  admissible {}",
                    t.value, t.ordering, t.admissible
                );
            }
            let (ordering, best) = s.minimax_ordering()?;
            println!("  Omega_t minimax = {best:.6} at ordering {ordering:?}");
        }
    }
    Ok(())
}
