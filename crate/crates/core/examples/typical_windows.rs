//! Typical windows for a two-term state and how well the Gaussian tail
//! predicts the weight left outside them.
//!
//! cargo run --release --example typical_windows

use locc_bounds::special::gaussian_upper_tail;
use locc_bounds::states::TwoTermState;
use locc_bounds::typical::{
    atypical_weight_exact, epsilon_lp2_exact, typical_entropy, typical_schmidt_log2, typical_window,
};

fn main() -> locc_bounds::Result<()> {
    let s = TwoTermState::new(0.3)?;
    let x = 2.0;
    let gamma = x * s.alpha();
    println!(
        "p = 0.3, gamma/alpha = {x}, 2Q(x) = {:.6e}",
        2.0 * gaussian_upper_tail(x)
    );
    for e in [8, 10, 12, 14] {
        let n = 1u64 << e;
        let w = typical_window(&s, gamma, n)?;
        let atyp = atypical_weight_exact(&s, &w)?;
        let count = typical_schmidt_log2(&s, &w)?;
        let ent = typical_entropy(&s, &w)?;
        println!(
            "N = 2^{e:<2} window [{}, {}]  atypical {:.6e}  log2 count - NS = {:+.3}  entropy/N = {:.6}",
            w.k_lo,
            w.k_hi,
            atyp,
            count.log2_count - count.ns,
            ent.normalized_per_copy(n),
        );
    }

    let w = typical_window(&s, gamma, 256)?;
    let e = epsilon_lp2_exact(&s, &w, gamma + 0.2)?;
    println!(
        "N = 256: residual weight {:.3e} <= {:.3e} (common degeneracy 2^{})",
        e.exact, e.sum_bound, e.log2_common_degeneracy
    );
    Ok(())
}
