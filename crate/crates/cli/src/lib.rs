//! Command-line front end for the `renyi_core` library.
//!
//! [`run`] parses arguments, executes one subcommand, writes a JSON report
//! to `out` and a one-line summary to `err`, and returns the exit code.

mod commands;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use renyi_core::spectral::DEFAULT_TOLERANCE;
use renyi_core::tensor::DEFAULT_MAX_DIM;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_DIMENSION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "renyi",
    version,
    about = "Rényi entropies and entropy rates of hidden Markov processes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rényi entropy of the first `--length` observed symbols.
    Entropy(LengthArgs),
    /// Rényi entropy rate with its component analysis.
    Rate(ModelArgs),
    /// Collision system, its strongly connected components and characteristic polynomial.
    Components(ModelArgs),
    /// Brute-force collision probability by enumerating every output string.
    Oracle(LengthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Path to a model file.
    pub model: PathBuf,
    /// Rényi order: an integer ≥ 2 for hidden models, any positive real ≠ 1 for Markov chains.
    #[arg(long, default_value_t = 2.0)]
    pub order: f64,
    /// Observe a two-state Markov chain through a binary symmetric channel with this flip probability.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Largest collision-system dimension to build.
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    pub max_dim: usize,
    /// Stopping tolerance of the spectral-radius iteration.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Drop collision indices that can never carry weight.
    #[arg(long)]
    pub prune: bool,
}

#[derive(Debug, Clone, Args)]
pub struct LengthArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of observed symbols.
    #[arg(long)]
    pub length: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] renyi_core::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_dimension_guard() => EXIT_DIMENSION,
            _ => EXIT_INVALID,
        }
    }
}

/// Executes `cli`, returning the report and a human summary.
pub fn execute(cli: &Cli) -> Result<(String, String), CliError> {
    match &cli.command {
        Command::Entropy(a) => commands::entropy(a),
        Command::Rate(a) => commands::rate(a),
        Command::Components(a) => commands::components(a),
        Command::Oracle(a) => commands::oracle(a),
    }
}

pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INVALID;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli) {
        Ok((report, summary)) => {
            if out.write_all(report.as_bytes()).is_err() {
                return EXIT_INVALID;
            }
            let _ = writeln!(err, "{summary}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
