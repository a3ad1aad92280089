//! `beescape` — run bee-colony experiments, build case datasets, and analyse
//! feature predictivity per search phase.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "beescape",
    version,
    about = "Binary bee colony with an operator pool: record successful moves \
             as landscape-feature cases and rank feature predictivity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded colony experiments and export the case dataset
    Run(RunArgs),
    /// Generate a random SUKP instance file
    GenSukp(GenSukpArgs),
    /// Analyse a case dataset: correlations, rankings, and classifiers
    Analyze(AnalyzeArgs),
    /// Print the operator success table of a dataset
    Report(ReportArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// Problem to search: onemax or sukp
    #[arg(long)]
    problem: Option<String>,
    /// One-Max dimension (default 1000)
    #[arg(long)]
    dims: Option<usize>,
    /// SUKP instance file (required for sukp; see gen-sukp)
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Iteration budget per run (default 150 for onemax, 500 for sukp)
    #[arg(long)]
    iters: Option<usize>,
    /// Number of independent runs, seeded seed, seed+1, ...
    #[arg(long)]
    runs: Option<u32>,
    /// Colony size N
    #[arg(long)]
    colony: Option<usize>,
    /// Scout limit: failures tolerated before a source restarts
    #[arg(long)]
    limit: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for cases.csv, success_table.csv, and run.log
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also record failed moves (adds a success column)
    #[arg(long)]
    record_failures: bool,
    /// eap formula variant: literal or sigma-divide
    #[arg(long)]
    eap_variant: Option<String>,
    /// key=value config file; command-line flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GenSukpArgs {
    /// Item count m (the genotype length)
    #[arg(long, short = 'm', default_value_t = 500)]
    items: usize,
    /// Element count n
    #[arg(long, short = 'n', default_value_t = 500)]
    elements: usize,
    /// Probability an item covers an element
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    /// Capacity as a fraction of the total element weight
    #[arg(long, default_value_t = 0.5)]
    ratio: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Instance file to write
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// cases.csv produced by `run`
    #[arg(long)]
    dataset: PathBuf,
    /// Output directory for the report files
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Forest size
    #[arg(long, default_value_t = 200)]
    trees: usize,
    /// Hold-out fraction of the stratified split
    #[arg(long, default_value_t = 0.2)]
    test_fraction: f64,
    /// Train forest trees one at a time instead of across threads
    #[arg(long)]
    serial: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// cases.csv produced by `run`
    #[arg(long)]
    dataset: PathBuf,
}

/// Failures split into validation (exit 1) and runtime/IO (exit 2).
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(msg) | CliError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<beescape_core::problems::ProblemError> for CliError {
    fn from(e: beescape_core::problems::ProblemError) -> Self {
        match e {
            beescape_core::problems::ProblemError::Io(io) => CliError::Runtime(io.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<beescape_core::dataset::DatasetError> for CliError {
    fn from(e: beescape_core::dataset::DatasetError) -> Self {
        match e {
            beescape_core::dataset::DatasetError::Io(io) => CliError::Runtime(io.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<beescape_core::abc::EngineError> for CliError {
    fn from(e: beescape_core::abc::EngineError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<beescape_core::analysis::AnalysisError> for CliError {
    fn from(e: beescape_core::analysis::AnalysisError) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(args) => commands::run(args),
        Command::GenSukp(args) => commands::gen_sukp(args),
        Command::Analyze(args) => commands::analyze(args),
        Command::Report(args) => commands::report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
