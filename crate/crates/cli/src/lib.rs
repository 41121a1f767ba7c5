//! The `cww` command-line tool.
//!
//! Exit codes: 0 success, 1 a check failed, 2 malformed or unreadable input,
//! 3 unknown label, symbol or state, 4 uncovered symbol, 5 budget exceeded.

pub mod checks;
pub mod commands;
pub mod model_file;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use commands::run;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Malformed(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cww_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use cww_core::Error as E;
        match self {
            CliError::Malformed(_) | CliError::Io(_) | CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                E::UnknownLabel(_) | E::UnknownSymbol(_) | E::UnknownState(_) => 3,
                E::UncoveredSymbols(_) => 4,
                E::BudgetExceeded { .. } => 5,
                _ => 2,
            },
        }
    }
}

pub const EXIT_CHECK_FAILED: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "cww", version, about = "Probabilistic automata and grammars over words")]
pub struct Cli {
    /// Decimal places for printed probabilities.
    #[arg(long, global = true, default_value_t = 6)]
    pub precision: usize,
    /// Largest gap a check tolerates.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for sampled probes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Drop symbols that no word label covers instead of failing.
    #[arg(long, global = true)]
    pub restrict_alphabet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the acceptance (or generation) probability of a string.
    Eval {
        model: PathBuf,
        /// Label names, whitespace separated; with --words, one Zadeh word
        /// per argument such as "0.2\a + 0.8\b".
        input: Vec<String>,
        #[arg(long)]
        words: bool,
    },
    /// Write the crisp retraction of a word-labeled model.
    Retract { model: PathBuf, out: Option<PathBuf> },
    /// Write the generalized extension (stored as a tagged crisp model).
    Extend { model: PathBuf, out: Option<PathBuf> },
    /// Grammar conversions and operators.
    Grammar {
        #[command(subcommand)]
        op: GrammarOp,
    },
    /// Run a named check and print a JSON report.
    Check(CheckArgs),
}

#[derive(Debug, Subcommand)]
pub enum GrammarOp {
    ToAutomaton { model: PathBuf, out: Option<PathBuf> },
    FromAutomaton { model: PathBuf, out: Option<PathBuf> },
    Retract { model: PathBuf, out: Option<PathBuf> },
    Extend { model: PathBuf, out: Option<PathBuf> },
}

#[derive(Debug, Clone, clap::Args)]
pub struct CheckArgs {
    /// One of: retraction, extension, equiv, continuity.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(checks::names()))]
    pub kind: String,
    pub models: Vec<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub max_len: usize,
    #[arg(long, default_value_t = 0.001)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1)]
    pub level: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Check the word language instead of transition rows.
    #[arg(long)]
    pub word_language: bool,
    /// Largest number of string evaluations a check may perform.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    /// Random probe words for the extension check, besides the Dirac words.
    #[arg(long, default_value_t = 2)]
    pub probe_words: usize,
}
