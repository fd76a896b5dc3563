//! `mstgrid`: reproducible experiments on MST probabilities of grid spanning trees.

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "mstgrid",
    version,
    about = "MST probabilities of grid spanning trees"
)]
struct Cli {
    /// JSON file with default values for the subcommand's flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a tree and report its statistics.
    Tree(commands::TreeArgs),
    /// Exact or estimated MST probability of a tree.
    Prob(commands::ProbArgs),
    /// Average stretch against estimated log-probability for random trees.
    Scatter(commands::ScatterArgs),
    /// Geometric mean of a family's power series and the decay lower bound.
    Decay(commands::DecayArgs),
    /// Variance of ln A across sizes of a family.
    Conjecture(commands::ConjectureArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Guard(String),
    Internal(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Guard(m) => write!(f, "error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<mstgrid::Error> for CliError {
    fn from(e: mstgrid::Error) -> Self {
        match e {
            mstgrid::Error::GuardExceeded { .. } => CliError::Guard(format!(
                "{e}; raise --max-exact-m/--max-exact-n or use --mode estimate"
            )),
            mstgrid::Error::Invariant(_) => CliError::Internal(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = cli.config.as_deref();
    let result = match &cli.command {
        Command::Tree(a) => commands::tree(a, config),
        Command::Prob(a) => commands::prob(a, config),
        Command::Scatter(a) => commands::scatter(a, config),
        Command::Decay(a) => commands::decay(a, config),
        Command::Conjecture(a) => commands::conjecture(a, config),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
