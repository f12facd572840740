//! Upper limit on gamma/alpha as the error budget shifts to the conversion
//! stage, written as CSV for plotting.
//!
//! cargo run --example budget_sweep > gamma_ratio.csv

use locc_bounds::output::Format;
use locc_bounds::states::SchmidtState;
use locc_bounds::sweep::{run_sweep, SweepQuantity, SweepSpec};

fn main() -> locc_bounds::Result<()> {
    let spec = SweepSpec::gamma_ratio_default();
    print!("{}", run_sweep(&spec)?.render(Format::Csv));

    // the same grid for one state pair, kept short
    let pair: (SchmidtState, SchmidtState) = ("0.43,0.57".parse()?, "0.14,0.86".parse()?);
    let spec = SweepSpec {
        quantity: SweepQuantity::CcCoefficient,
        eps2_steps: 5,
        pairs: vec![pair],
        ..SweepSpec::gamma_ratio_default()
    };
    eprint!("{}", run_sweep(&spec)?.render(Format::Table));
    Ok(())
}
