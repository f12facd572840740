//! Runs every self-check suite and prints one line per check.
//!
//! cargo run --release --example self_check

use locc_bounds::verify::{run, Suite};

fn main() -> locc_bounds::Result<()> {
    let checks = run(Suite::All)?;
    for c in &checks {
        println!(
            "{:<4} {:<8} {:<30} measured {:.4e}",
            if c.passed { "ok" } else { "FAIL" },
            c.suite,
            c.name,
            c.measured
        );
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", checks.len());
    Ok(())
}
