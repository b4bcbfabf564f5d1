//! `qmeter` — config-driven runner for the measurement toolkit.
//!
//! Thin argument-parsing shell: everything it does lives in the library
//! (`scenario`, `suites`, `search`, `models`).

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use qmeter::models::{describe_model, MODEL_FAMILIES};
use qmeter::scenario::{emit_report, parse_config, run_scenario, ReportFormat};
use qmeter::suites::{run_suite, SUITE_NAMES};
use qmeter::Error;

#[derive(Parser)]
#[command(name = "qmeter", version, about = "Quantum measurement statistics: scenarios, theorem suites, and limit searches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and emit its report.
    Run {
        /// Path to a JSON scenario config.
        #[arg(long)]
        config: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a named randomized verification suite.
    Verify {
        /// Suite name; see --suite list.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for instruments beating the standard quantum limit.
    Search {
        /// Path to a JSON scenario config with kind "search".
        #[arg(long)]
        config: PathBuf,
        /// Candidate budget override.
        #[arg(long)]
        budget: Option<usize>,
        /// Seed override.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Describe a named instrument model family.
    Describe {
        /// One of: luders, unsharp, measure_prepare, von_neumann.
        #[arg(long)]
        model: String,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_invalid_input() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Run { config, out, format } => {
            let bytes = std::fs::read(&config)?;
            let scenario = parse_config(&bytes)?;
            let started = Instant::now();
            let report = run_scenario(&scenario)?;
            eprintln!(
                "qmeter: scenario {} finished in {:.1} ms",
                scenario.kind.as_str(),
                started.elapsed().as_secs_f64() * 1e3
            );
            let rendered = emit_report(&report, format.into())?;
            match out {
                Some(path) => std::fs::write(path, rendered)?,
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(&rendered)?;
                }
            }
            Ok(report.passed())
        }
        Command::Verify { suite, trials, seed } => {
            if suite == "list" {
                for name in SUITE_NAMES {
                    println!("{name}");
                }
                return Ok(true);
            }
            let started = Instant::now();
            let report = run_suite(&suite, trials, seed).map_err(|e| match e {
                Error::Scenario(msg) => Error::config("suite", msg),
                other => other,
            })?;
            println!(
                "suite {}: trials={} conditioned={} violations={} worst_margin={:+.3e} {} ({:.1} ms)",
                report.name,
                report.trials,
                report.conditioned,
                report.violations,
                if report.worst_margin.is_finite() { report.worst_margin } else { 0.0 },
                if report.pass { "PASS" } else { "FAIL" },
                started.elapsed().as_secs_f64() * 1e3
            );
            Ok(report.pass)
        }
        Command::Search { config, budget, seed } => {
            let bytes = std::fs::read(&config)?;
            let mut scenario = parse_config(&bytes)?;
            if scenario.kind != qmeter::scenario::ScenarioKind::Search {
                return Err(Error::config(
                    "kind",
                    format!("search subcommand needs kind \"search\", got {:?}", scenario.kind.as_str()),
                ));
            }
            if budget.is_some() {
                scenario.budget = budget;
            }
            if seed.is_some() {
                scenario.seed = seed;
            }
            let report = run_scenario(&scenario)?;
            let rendered = emit_report(&report, ReportFormat::Json)?;
            use std::io::Write;
            std::io::stdout().write_all(&rendered)?;
            Ok(report.passed())
        }
        Command::Describe { model } => match describe_model(&model) {
            Some(text) => {
                println!("{text}");
                Ok(true)
            }
            None => Err(Error::config(
                "model",
                format!("unknown model {model:?}; expected one of {MODEL_FAMILIES:?}"),
            )),
        },
    }
}
