//! Command-line front end: scenario simulation, verification suites and
//! counterexample reproduction.

pub mod counterexample;
pub mod error;
pub mod render;
pub mod scenario;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use seqgroves::{run_suite, Grid, Suite, SuiteConfig, Value};

pub use counterexample::Counterexample;
pub use error::CliError;
pub use scenario::{Row, ScenarioConfig, Simulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "seqgroves",
    version,
    about = "Sequential Vickrey and Bailey-Cavallo auctions in exact arithmetic"
)]
pub struct Cli {
    /// Output format (defaults: table for simulate, json for verify and counterexample).
    #[arg(long, global = true, value_enum)]
    pub out: Option<OutputFormat>,
    /// Worker threads for verification sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one auction under a strategy profile and under truth-telling.
    Simulate(SimulateArgs),
    /// Run a verification suite over a grid of types.
    Verify(VerifyArgs),
    /// Reproduce one of the fixed counterexamples.
    Counterexample(CounterexampleArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON scenario file; replaces the other flags.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, default_value = "vickrey")]
    pub mechanism: String,
    /// Comma-separated true types, e.g. `3,5,4` or `1/2,2`.
    #[arg(long, value_delimiter = ',')]
    pub types: Vec<Value>,
    /// One strategy for everybody, or one per player, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "truth")]
    pub profile: Vec<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// `lo..hi`, `lo..hi:step` or a comma-separated list.
    #[arg(long, default_value = "0..4")]
    pub grid: String,
    #[arg(long, default_value = "1")]
    pub epsilon: Value,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    /// no-dominant, bc-not-utility-equal, nash-deviation or bc-no-socially-optimal.
    pub name: String,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value = "1")]
    pub epsilon: Value,
}

/// Text to print and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let pool = match cli.jobs {
        Some(0) => return Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(j) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| CliError::Invariant(e.to_string()))?,
        ),
        None => None,
    };
    let go = || dispatch(cli.command, cli.out);
    match pool {
        Some(p) => p.install(go),
        None => go(),
    }
}

fn dispatch(command: Command, out: Option<OutputFormat>) -> Result<Outcome, CliError> {
    match command {
        Command::Simulate(a) => simulate(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Counterexample(a) => {
            let which: Counterexample = a.name.parse()?;
            let reports = counterexample::reproduce(which, a.n, a.epsilon)?;
            reports_outcome(&reports, out.unwrap_or(OutputFormat::Json))
        }
    }
}

fn simulate(a: SimulateArgs, out: Option<OutputFormat>) -> Result<Outcome, CliError> {
    let cfg = match &a.scenario {
        Some(path) => ScenarioConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => {
            if a.types.is_empty() {
                return Err(CliError::Usage(
                    "simulate needs --types or --scenario".into(),
                ));
            }
            ScenarioConfig {
                n: a.types.len(),
                mechanism: a.mechanism,
                types: a.types,
                profile: a.profile,
                output: None,
            }
        }
    };
    let format = out.or(cfg.output).unwrap_or(OutputFormat::Table);
    let sim = cfg.simulate()?;
    Ok(Outcome {
        stdout: render::simulation(&sim, format)?,
        code: 0,
    })
}

fn verify(a: VerifyArgs, out: Option<OutputFormat>) -> Result<Outcome, CliError> {
    let suite: Suite = a.suite.parse()?;
    let grid: Grid = a.grid.parse()?;
    let cfg = SuiteConfig {
        n: a.n,
        grid,
        epsilon: a.epsilon,
    };
    let reports = run_suite(suite, &cfg)?;
    for r in &reports {
        if !r.passed && r.witness.is_none() {
            return Err(CliError::Invariant(format!(
                "{} failed without a witness",
                r.suite
            )));
        }
        if let Some(w) = &r.witness {
            if !w.recheck()? {
                return Err(CliError::Invariant(format!(
                    "{} witness does not re-simulate",
                    r.suite
                )));
            }
        }
    }
    reports_outcome(&reports, out.unwrap_or(OutputFormat::Json))
}

fn reports_outcome(
    reports: &[seqgroves::VerificationReport],
    format: OutputFormat,
) -> Result<Outcome, CliError> {
    let code = if reports.iter().all(|r| r.passed) {
        0
    } else {
        1
    };
    Ok(Outcome {
        stdout: render::reports(reports, format)?,
        code,
    })
}

/// Parses `args` and runs them, mapping errors to exit codes.
pub fn main_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return Outcome {
                stdout: String::new(),
                code,
            };
        }
    };
    match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            Outcome {
                stdout: String::new(),
                code: e.exit_code(),
            }
        }
    }
}
