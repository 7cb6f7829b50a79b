//! Command-line driver: measures, bound reports, exponent sweeps, soundness
//! fuzzing and the worked-example checks.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 theorem conditions not
//! satisfied, 3 a checked inequality or example value failed.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mpbounds::{states, MeasureKind, StateVector};

pub mod bounds_cmd;
pub mod examples_cmd;
pub mod format;
pub mod fuzz;
pub mod measure_cmd;
pub mod sweep;

pub use format::Format;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_CONDITIONS: u8 = 2;
pub const EXIT_FAILED: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mpbounds",
    version,
    about = "Monogamy and polygamy bounds for multiqubit entanglement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the one-to-rest and pairwise measures of a state
    Measure(measure_cmd::MeasureArgs),
    /// Evaluate one bound for a state
    Bounds(bounds_cmd::BoundsArgs),
    /// Tabulate a bound family over a range of exponents as CSV
    Sweep(sweep::SweepArgs),
    /// Check every applicable bound on Haar-random states
    Fuzz(fuzz::FuzzArgs),
    /// Recompute the worked-example values and saturation gaps
    Examples(examples_cmd::ExamplesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Concurrence,
    Assistance,
}

impl From<Kind> for MeasureKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Concurrence => MeasureKind::Concurrence,
            Kind::Assistance => MeasureKind::ConcurrenceOfAssistance,
        }
    }
}

#[derive(Clone, Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StateSource {
    /// Built-in state: w2..w5, ghz2..ghz5, example1 (alias of w4), example2
    #[arg(long)]
    pub catalog: Option<String>,

    /// JSON state file: {"n_qubits": n, "amplitudes": [[re, im], ...]}
    #[arg(long)]
    pub state: Option<PathBuf>,
}

impl StateSource {
    pub fn catalog(name: &str) -> Self {
        Self {
            catalog: Some(name.into()),
            state: None,
        }
    }

    /// Loads the state and returns it with a display label.
    pub fn load(&self) -> Result<(String, StateVector)> {
        match (&self.catalog, &self.state) {
            (Some(name), _) => {
                let psi = states::catalog(name).with_context(|| {
                    format!("known states: {}", states::CATALOG_NAMES.join(", "))
                })?;
                Ok((name.clone(), psi))
            }
            (None, Some(path)) => {
                let psi = StateVector::load(path)
                    .with_context(|| format!("reading state file {}", path.display()))?;
                Ok((path.display().to_string(), psi))
            }
            (None, None) => bail!("either --catalog or --state is required"),
        }
    }
}

/// Runs a parsed command, writing its report to `out`, and returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Measure(args) => measure_cmd::run(&args, out),
        Command::Bounds(args) => bounds_cmd::run(&args, out),
        Command::Sweep(args) => sweep::run(&args, out),
        Command::Fuzz(args) => fuzz::run(&args, out),
        Command::Examples(args) => examples_cmd::run(&args, out),
    }
}
