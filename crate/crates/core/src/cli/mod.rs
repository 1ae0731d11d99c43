//! Command-line front end: `exact`, `mc` and `verify`.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when `verify` finds a
//! failing check.

mod render;
mod verify;

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::exact::{exact_table, ExactError};
use crate::mc::{run_mc, McConfig, McError};

pub use render::approx;
pub use verify::{verify, VerifyConfig, VerifyRecord, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 7;
/// Monte Carlo estimates pass when within this many standard errors.
pub const TOLERANCE_SIGMAS: f64 = 4.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Mc(#[from] McError),
    #[error("invalid range n_min = {n_min}, n_max = {n_max}: 2 ≤ n_min ≤ n_max is required")]
    Range { n_min: u32, n_max: u32 },
    #[error("failed to write output: {0}")]
    Io(#[from] io::Error),
    #[error("failed to write csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("failed to write json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "broken-stick",
    version,
    about = "Exact and Monte Carlo broken stick probabilities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact probabilities by symbolic integration and closed form
    Exact(ExactArgs),
    /// Monte Carlo estimate of the polygon probability
    Mc(McArgs),
    /// Cross-check exact and Monte Carlo results over a range of n
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    /// Number of break points
    #[arg(long)]
    pub n: u32,
    /// Include the per-k integrals
    #[arg(long)]
    pub per_k: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// Number of break points
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: u32,
    /// Emit per-k counts as CSV rows instead of the summary row
    #[arg(long)]
    pub per_k: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    pub n_min: u32,
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: u32,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Exact(args) => {
            let table = exact_table(args.n)?;
            render::exact(&table, args.per_k, args.format, out)?;
            Ok(EXIT_OK)
        }
        Command::Mc(args) => {
            let config = McConfig::new(args.n, args.trials, args.seed).with_workers(args.workers);
            let report = run_mc(&config)?;
            render::mc(&report, args.per_k, args.format, out)?;
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let report = verify(&VerifyConfig {
                n_min: args.n_min,
                n_max: args.n_max,
                trials: args.trials,
                seed: args.seed,
                workers: args.workers,
            })?;
            render::verify(&report, args.format, out)?;
            Ok(if report.overall_pass {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return EXIT_INVALID;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}
