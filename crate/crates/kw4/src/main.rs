//! Command-line front end.
//!
//! Exit codes: 0 when every trial passes, 1 when at least one trial
//! fails, 2 on a scenario or argument parse error.

use clap::{Args, Parser, Subcommand};
use kw4::report::{
    example_3_2_residual, run_scenario, star_table_entries, KindRepr, Mode, Report, Scenario,
    ScalarsRepr,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kw4", version, about = "Weyl connection verifier for 4d (para-)Hermitian models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario file and print or write a report.
    Run(RunArgs),
    /// Print the Hodge star table of the standard neutral model.
    StarTable {
        /// Reverse the orientation of the volume element.
        #[arg(long)]
        flip_orientation: bool,
    },
    /// Check the closed-form example model against its displayed values.
    #[command(name = "example-3-2")]
    Example32 {
        /// Metric derivatives f1,f2,f3,f4 at the base point.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        f: Vec<f64>,
    },
    /// Run a randomized verification sweep.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (JSON).
    scenario: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Worker count.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Override the scenario tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Structure kind: para or complex.
    #[arg(long, value_enum, default_value = "para")]
    kind: CliKind,
    /// Metric signature: 2,2 or 0,4.
    #[arg(long, default_value = "2,2")]
    signature: String,
    /// Number of random trials.
    #[arg(long, default_value_t = 32)]
    trials: u64,
    /// Base seed for the trial generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Scalar field: real or complex.
    #[arg(long, value_enum, default_value = "real")]
    scalars: CliScalars,
    /// Residual tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Worker count.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum CliKind {
    Para,
    Complex,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum CliScalars {
    Real,
    Complex,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Run(args) => {
            let text = std::fs::read_to_string(&args.scenario)
                .map_err(|e| format!("{}: {e}", args.scenario.display()))?;
            let mut scenario: Scenario = serde_json::from_str(&text).map_err(|e| {
                format!(
                    "{}: line {} column {}: {e}",
                    args.scenario.display(),
                    e.line(),
                    e.column()
                )
            })?;
            if let Some(t) = args.tolerance {
                scenario.tolerance = Some(t);
            }
            let report = run_scenario(&scenario, args.jobs.max(1))?;
            emit_report(&report, args.report.as_deref())?;
            Ok(report.all_pass())
        }
        Command::StarTable { flip_orientation } => {
            let entries = star_table_entries::<f64>(flip_orientation).map_err(|e| e.to_string())?;
            let mut all_pass = true;
            for (src, dst, _, dev) in &entries {
                let ok = *dev == 0.0;
                all_pass &= ok;
                println!(
                    "star({src}) = {dst}  [{}]",
                    if ok { "pass" } else { "FAIL" }
                );
            }
            Ok(all_pass)
        }
        Command::Example32 { f } => {
            let f: [f64; 4] = f
                .try_into()
                .map_err(|_| "--f expects exactly four values".to_string())?;
            let residual = example_3_2_residual::<f64>(f).map_err(|e| e.to_string())?;
            let pass = residual <= 1e-12;
            println!(
                "example-3-2 f={f:?} residual={residual:.3e}  [{}]",
                if pass { "pass" } else { "FAIL" }
            );
            Ok(pass)
        }
        Command::Verify(args) => {
            let scenario = Scenario {
                mode: Mode::Verify,
                kind: match args.kind {
                    CliKind::Para => KindRepr::Para,
                    CliKind::Complex => KindRepr::Complex,
                },
                signature: args.signature,
                scalars: match args.scalars {
                    CliScalars::Real => ScalarsRepr::Real,
                    CliScalars::Complex => ScalarsRepr::Complex,
                },
                seed: args.seed,
                trials: args.trials,
                tolerance: args.tolerance,
                g0: None,
                g1: None,
                j: None,
                f: None,
                flip_orientation: false,
            };
            let report = run_scenario(&scenario, args.jobs.max(1))?;
            println!(
                "verify: {}/{} trials pass, max residual {:.3e}",
                report.summary.pass_count, report.summary.trials, report.summary.max_residual
            );
            Ok(report.all_pass())
        }
    }
}

fn emit_report(report: &Report, path: Option<&std::path::Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| format!("{}: {e}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
