use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use locc_bounds::bounds::{
    cc_lower_bound_general, cc_lower_bound_two_term, ineff_lower_bound_general,
    ineff_lower_bound_two_term, ConversionBound, ErrorBudget,
};
use locc_bounds::lp::{
    decompose, decompose_general, trace_distance_to_ideal, LpDecomposition, Mode,
    TraceDistanceFormula,
};
use locc_bounds::output::{flatten_json, Cell, Format, Table};
use locc_bounds::states::{LogBase, OmegaStrategy, SchmidtState};
use locc_bounds::sweep::{run_sweep, SweepQuantity, SweepSpec};
use locc_bounds::typical::{gamma_from_error_general, gamma_from_error_two_term};
use locc_bounds::verify::{self, Suite};
use locc_bounds::{Error, Result};

#[derive(Parser)]
#[command(
    name = "locc",
    version,
    about = "Lower bounds on classical communication and inefficiency of LOCC conversion"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format. Defaults to csv for `sweep`, json otherwise.
    #[arg(long, global = true)]
    format: Option<Format>,
    #[arg(long, global = true, default_value = "sorted")]
    omega_strategy: OmegaStrategy,
    #[arg(long, global = true, default_value = "2")]
    omega_log_base: LogBase,
    #[arg(long, global = true, default_value = "paper")]
    trace_distance: TraceDistanceFormula,
    #[arg(long, global = true, default_value_t = 0.01)]
    total_error: f64,
    /// Reserved; nothing here is random.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy, alpha and Omega analysis of a Schmidt probability vector.
    State {
        /// Comma list or JSON array, e.g. 0.3,0.3,0.4
        probs: SchmidtState,
    },
    /// Evaluate a conversion lower bound.
    Bound {
        kind: BoundKind,
        #[arg(long)]
        from: SchmidtState,
        #[arg(long)]
        to: SchmidtState,
        #[arg(long, default_value_t = 0.0)]
        eps2: f64,
    },
    /// Evaluate a quantity over an eps2 grid.
    Sweep {
        #[arg(long, default_value = "gamma-ratio")]
        quantity: SweepQuantity,
        #[arg(long, default_value_t = 0.0)]
        eps2_start: f64,
        #[arg(long, default_value_t = 0.0099)]
        eps2_end: f64,
        #[arg(long, default_value_t = 100)]
        eps2_steps: usize,
        /// State pair `from:to`, repeatable (cc/ineff coefficient sweeps).
        #[arg(long = "pair")]
        pairs: Vec<String>,
        /// Two-term state, repeatable (atypical-weight sweeps).
        #[arg(long = "state")]
        states: Vec<SchmidtState>,
        /// Block size, repeatable (atypical-weight sweeps).
        #[arg(long = "n")]
        n_values: Vec<u64>,
    },
    /// Lo-Popescu resource ledger.
    Lp {
        #[arg(long, conflicts_with = "p")]
        state: Option<SchmidtState>,
        /// Smaller Schmidt probability of a two-term state.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        n: u64,
        #[arg(long, required_unless_present = "eps_lp1", conflicts_with = "eps_lp1")]
        gamma: Option<f64>,
        /// Derive gamma from the target atypical weight.
        #[arg(long)]
        eps_lp1: Option<f64>,
        #[arg(long, default_value = "both")]
        mode: LpMode,
    },
    /// Run a self-check suite; exits nonzero if any check fails.
    Verify {
        #[arg(default_value = "all")]
        suite: Suite,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundKind {
    Cc,
    Ineff,
}

#[derive(Clone, Copy, ValueEnum)]
enum LpMode {
    Asymptotic,
    Exact,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn render_value(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("json");
            s.push('\n');
            s
        }
        other => flatten_json(v).render(other),
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn run(cli: Cli) -> Result<(String, bool)> {
    let g = cli.global;
    if !(g.total_error > 0.0 && g.total_error < 1.0) {
        return Err(Error::Parse(format!(
            "--total-error {} must lie in (0, 1)",
            g.total_error
        )));
    }
    let format = g.format.unwrap_or(match cli.command {
        Command::Sweep { .. } => Format::Csv,
        _ => Format::Json,
    });
    match cli.command {
        Command::State { probs } => Ok((
            render_value(&state_report(&probs, g.omega_log_base)?, format),
            true,
        )),
        Command::Bound {
            kind,
            from,
            to,
            eps2,
        } => {
            let budget = ErrorBudget::with_total(g.total_error, eps2, g.trace_distance)?;
            let b = bound(
                kind,
                &from,
                &to,
                &budget,
                g.omega_strategy,
                g.omega_log_base,
            )?;
            Ok((render_value(&to_value(&b), format), true))
        }
        Command::Sweep {
            quantity,
            eps2_start,
            eps2_end,
            eps2_steps,
            pairs,
            states,
            n_values,
        } => {
            let mut spec_pairs = pairs
                .iter()
                .map(|s| parse_pair(s))
                .collect::<Result<Vec<_>>>()?;
            spec_pairs.extend(states.into_iter().map(|s| (s.clone(), s)));
            let spec = SweepSpec {
                quantity,
                eps2_start,
                eps2_end,
                eps2_steps,
                n_values,
                pairs: spec_pairs,
                total_error: g.total_error,
                trace_distance: g.trace_distance,
                omega_strategy: g.omega_strategy,
                omega_log_base: g.omega_log_base,
            };
            Ok((run_sweep(&spec)?.render(format), true))
        }
        Command::Lp {
            state,
            p,
            n,
            gamma,
            eps_lp1,
            mode,
        } => {
            let state = match (state, p) {
                (Some(s), None) => s,
                (None, Some(p)) => SchmidtState::new(vec![p, 1.0 - p])?,
                _ => return Err(Error::Parse("give exactly one of --state or --p".into())),
            };
            let v = lp_report(&state, n, gamma, eps_lp1, mode, &g)?;
            Ok((render_value(&v, format), true))
        }
        Command::Verify { suite } => {
            let checks = verify::run(suite)?;
            let ok = checks.iter().all(|c| c.passed);
            let mut t = Table::new(["suite", "name", "passed", "measured", "threshold", "detail"]);
            for c in &checks {
                t.push(vec![
                    Cell::Text(c.suite.to_string()),
                    Cell::Text(c.name.clone()),
                    Cell::Bool(c.passed),
                    Cell::Num(c.measured),
                    Cell::Num(c.threshold),
                    Cell::Text(c.detail.clone()),
                ]);
            }
            Ok((t.render(format), ok))
        }
    }
}

fn parse_pair(s: &str) -> Result<(SchmidtState, SchmidtState)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("pair {s:?}: expected from:to")))?;
    Ok((a.parse()?, b.parse()?))
}

fn bound(
    kind: BoundKind,
    from: &SchmidtState,
    to: &SchmidtState,
    budget: &ErrorBudget,
    strategy: OmegaStrategy,
    base: LogBase,
) -> Result<ConversionBound> {
    if from.rank() == 2 {
        let t = from.as_two_term()?;
        match kind {
            BoundKind::Cc => cc_lower_bound_two_term(&t, to, budget),
            BoundKind::Ineff => ineff_lower_bound_two_term(&t, to, budget),
        }
    } else {
        match kind {
            BoundKind::Cc => cc_lower_bound_general(from, to, budget, strategy, base),
            BoundKind::Ineff => ineff_lower_bound_general(from, to, budget, strategy, base),
        }
    }
}

fn state_report(s: &SchmidtState, base: LogBase) -> Result<Value> {
    let first = s.probs()[0];
    let degenerate = s.probs().iter().all(|&p| (p - first).abs() <= 1e-12);
    let mut report = json!({
        "probs": s.probs(),
        "rank": s.rank(),
        "entropy": s.entropy(),
        "alpha": s.alpha(),
        "degenerate": degenerate,
    });
    let sorted = s.omega_t(OmegaStrategy::SortedPrescription, base)?;
    let obj = report.as_object_mut().expect("object");
    obj.insert("omega_t_sorted".into(), to_value(&sorted));
    match s.omega_t(OmegaStrategy::MinimaxOrdering, base) {
        Ok(m) => obj.insert("omega_t_minimax".into(), to_value(&m)),
        Err(e) => obj.insert("omega_t_minimax".into(), Value::String(e.to_string())),
    };
    match s.omega_vectors_all() {
        Ok(all) => {
            let rows: Vec<Value> = all
                .into_iter()
                .map(|(ordering, omega)| json!({ "ordering": ordering, "omega": omega }))
                .collect();
            obj.insert("omega_vectors".into(), Value::Array(rows));
        }
        Err(e) => {
            obj.insert("omega_vectors".into(), Value::String(e.to_string()));
        }
    }
    Ok(report)
}

fn ledger(s: &SchmidtState, n: u64, gamma: f64, mode: Mode, g: &Global) -> Result<LpDecomposition> {
    if s.rank() == 2 {
        decompose(&s.as_two_term()?, n, gamma, mode)
    } else {
        decompose_general(s, n, gamma, g.omega_strategy, g.omega_log_base, mode)
    }
}

fn with_trace_distance(d: &LpDecomposition, g: &Global) -> Result<Value> {
    let mut v = to_value(d);
    let obj = v.as_object_mut().expect("object");
    if d.eps_lp1 > 1.0 {
        // an upper bound above one says nothing about the output state
        obj.insert(
            "trace_distance".into(),
            json!({ "vacuous": "eps_lp1 bound exceeds 1" }),
        );
        return Ok(v);
    }
    let paper = trace_distance_to_ideal(d, TraceDistanceFormula::Paper)?;
    let exact = trace_distance_to_ideal(d, TraceDistanceFormula::ExactPureState)?;
    obj.insert(
        "trace_distance".into(),
        json!({
            "selected": g.trace_distance,
            "paper": paper,
            "exact_pure_state": exact,
            "discrepancy": exact - paper,
        }),
    );
    Ok(v)
}

fn lp_report(
    s: &SchmidtState,
    n: u64,
    gamma: Option<f64>,
    eps_lp1: Option<f64>,
    mode: LpMode,
    g: &Global,
) -> Result<Value> {
    let (gamma, derivation) = match (gamma, eps_lp1) {
        (Some(gm), _) => (gm, Value::Null),
        (None, Some(eps)) => {
            let (ratio, scale, scale_name) = if s.rank() == 2 {
                (gamma_from_error_two_term(eps)?, s.alpha(), "alpha")
            } else {
                let omega = s.omega_t(g.omega_strategy, g.omega_log_base)?.value;
                (gamma_from_error_general(eps, s.rank())?, omega, "omega_t")
            };
            (
                ratio * scale,
                json!({ "eps_lp1": eps, "gamma_ratio": ratio, scale_name: scale }),
            )
        }
        (None, None) => return Err(Error::Parse("give --gamma or --eps-lp1".into())),
    };
    let mut out = serde_json::Map::new();
    out.insert("gamma".into(), json!(gamma));
    if !derivation.is_null() {
        out.insert("gamma_from".into(), derivation);
    }
    if matches!(mode, LpMode::Asymptotic | LpMode::Both) {
        let d = ledger(s, n, gamma, Mode::Asymptotic, g)?;
        out.insert("asymptotic".into(), with_trace_distance(&d, g)?);
    }
    match mode {
        LpMode::Exact => {
            let d = ledger(s, n, gamma, Mode::ExactFiniteN, g)?;
            out.insert("exact".into(), with_trace_distance(&d, g)?);
        }
        LpMode::Both => match ledger(s, n, gamma, Mode::ExactFiniteN, g) {
            Ok(d) => {
                out.insert("exact".into(), with_trace_distance(&d, g)?);
            }
            Err(e @ (Error::EnumerationLimit(_) | Error::EmptyTypicalSet(_))) => {
                out.insert("exact".into(), json!({ "skipped": e.to_string() }));
            }
            Err(e) => return Err(e),
        },
        LpMode::Asymptotic => {}
    }
    Ok(Value::Object(out))
}
