//! Command-line front end: curve search, code construction, verification and sweeps.
//!
//! Exit codes: 0 pass, 1 a verification failed, 2 bad input, 3 budget exceeded.

pub mod commands;
pub mod job;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use job::{Format, JobSpec, Method};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("no curve found: {0}")]
    NotFound(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Budget(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ellmds",
    version,
    about = "MDS codes from index-2 subgroups of elliptic curves"
)]
pub struct Cli {
    /// Worker threads for exhaustive checks.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find a curve with a given point count and describe its group.
    Search(SearchArgs),
    /// Build a generator matrix.
    Build(BuildArgs),
    /// Check a generator matrix for the MDS property and its Schur square.
    Verify(VerifyArgs),
    /// Tabulate lengths and check constructions across several fields.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub modulus: Option<String>,
    /// Defaults to the largest admissible even point count.
    #[arg(long)]
    pub target_n: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// JSON job file; flags below override its fields.
    #[arg(long)]
    pub job: Option<PathBuf>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub modulus: Option<String>,
    /// Comma-separated `a1,a2,a3,a4,a6` or `a4,a6`.
    #[arg(long, value_delimiter = ',')]
    pub curve: Option<Vec<String>>,
    #[arg(long)]
    pub target_n: Option<u64>,
    #[arg(long)]
    pub subgroup: Option<usize>,
    /// Subgroup generator; repeatable.
    #[arg(long = "generator")]
    pub generators: Vec<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub extend: bool,
    #[arg(long)]
    pub point_p: Option<String>,
    #[arg(long)]
    pub point_q: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Text matrix or structured (JSON) record.
    pub matrix: PathBuf,
    /// Defaults to every method within budget.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub methods: Vec<Method>,
    /// Sample instead of failing when an explicit method exceeds the budget.
    #[arg(long)]
    pub sample: bool,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [7u64, 8, 9, 11, 13])]
    pub q: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4, 5, 6])]
    pub k: Vec<usize>,
    #[arg(long)]
    pub budget: Option<u64>,
}

/// Rendered output plus whether every check passed.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let format = cli.format;
    pool.install(|| match cli.command {
        Command::Search(a) => commands::search(&a, format.unwrap_or_default()),
        Command::Build(a) => commands::build(&a, format),
        Command::Verify(a) => commands::verify(&a, format.unwrap_or_default()),
        Command::Sweep(a) => commands::sweep(&a, format.unwrap_or_default()),
    })
}
