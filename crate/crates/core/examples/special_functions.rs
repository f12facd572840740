//! Lambert W, the Gaussian tail with its Mills bracket, and exact binomials.
//!
//! cargo run --example special_functions

use locc_bounds::special::{
    exact_binomial, gaussian_upper_tail, lambert_w0, log2_biguint, log2_binomial, mills_sandwich,
};

fn main() -> locc_bounds::Result<()> {
    let x = 8.0 / (std::f64::consts::PI * 0.01 * 0.01);
    let w = lambert_w0(x)?;
    println!("W({x:.1}) = {w:.12}, sqrt = {:.12}", w.sqrt());

    println!("{:>5} {:>14} {:>14} {:>14}", "x", "lower", "2Q(x)", "upper");
    for x in [1.0, 1.5, 2.0, 3.0, 4.0, 6.0] {
        let s = mills_sandwich(x)?;
        println!(
            "{x:>5} {:>14.6e} {:>14.6e} {:>14.6e}",
            s.lower,
            2.0 * gaussian_upper_tail(x),
            s.upper
        );
    }

    let c = exact_binomial(1000, 500)?;
    println!(
        "C(1000, 500) has {} bits; log2 = {:.9}",
        c.bits(),
        log2_biguint(&c)
    );
    println!(
        "log2 C(10^5, 3*10^4) = {:.6}",
        log2_binomial(100_000, 30_000)?
    );
    Ok(())
}
