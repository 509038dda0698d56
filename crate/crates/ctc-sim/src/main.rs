use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ctc_sim::runner::{self, Protocol, RunReport};
use ctc_sim::Error;

/// Simulator for CR quantum systems interacting with Deutsch-model CTCs.
#[derive(Parser)]
#[command(name = "ctc-sim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file, printing a summary and optionally writing CSV.
    Run {
        /// Path to the scenario JSON document.
        scenario: PathBuf,
        /// Write the sweep table as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the scenario's trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Override the scenario's numeric tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Parse and validate a scenario file without running it.
    Validate {
        scenario: PathBuf,
    },
    /// List the runnable protocol names.
    ListProtocols,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Parse(_) | Error::Validation(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            scenario,
            csv,
            seed,
            trials,
            tol,
        } => {
            let mut parsed = load(&scenario)?;
            if let Some(seed) = seed {
                parsed.seed = seed;
            }
            if let Some(trials) = trials {
                parsed.trials = trials;
            }
            if let Some(tol) = tol {
                parsed.tol = tol;
            }
            parsed.validate()?;
            let report = runner::run_scenario(&parsed)?;
            print_report(&report);
            if let Some(path) = csv {
                std::fs::write(&path, runner::emit_csv(&report)).map_err(|e| {
                    Error::Solver(format!("failed to write {}: {e}", path.display()))
                })?;
                println!("csv written to {}", path.display());
            }
            Ok(())
        }
        Command::Validate { scenario } => {
            let parsed = load(&scenario)?;
            println!(
                "ok: {} scenario with {} state spec(s), seed {}",
                parsed.protocol.name(),
                parsed.state_specs.len(),
                parsed.seed
            );
            Ok(())
        }
        Command::ListProtocols => {
            for protocol in Protocol::all() {
                println!("{}", protocol.name());
            }
            Ok(())
        }
    }
}

fn load(path: &PathBuf) -> Result<runner::Scenario, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    runner::parse_scenario(&text)
}

fn print_report(report: &RunReport) {
    println!(
        "protocol: {} (seed {})",
        report.scenario.protocol.name(),
        report.scenario.seed
    );
    for line in &report.summaries {
        println!("  {line}");
    }
    if !report.rows.is_empty() {
        println!(
            "  {:>12} {:>16} {:>14} {:>6}",
            "epsilon", "mean_fidelity", "stderr", "beats"
        );
        for row in &report.rows {
            println!(
                "  {:>12.6} {:>16.9} {:>14.3e} {:>6}",
                row.epsilon, row.mean_fidelity, row.stderr, row.beats_classical
            );
        }
    }
    println!("  completed in {:.3?}", report.duration);
}
