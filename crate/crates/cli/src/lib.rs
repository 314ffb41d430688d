//! Command-line front end for the explanation-ranking toolkit.
//!
//! Subcommands compose through files only: `build` turns a raw review
//! corpus into the two-file dataset format, `split` derives
//! coverage-constrained train/test splits, `train` fits a latent model on
//! one split, `eval` grades one method on one split, `bench` runs the full
//! method comparison over fresh splits, and `rank` prints ranked
//! explanations for a single user-item pair.
//!
//! Every flag can instead come from a `key = value` file passed with
//! `--config`, with explicit flags winning. File-writing commands record
//! their resolved settings in a provenance file that is itself a valid
//! `--config` input, so any run can be reproduced from its outputs.

pub mod commands;
mod config;
mod table;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

pub use config::ConfigFile;

/// A command-line or configuration mistake, reported with exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Parser)]
#[command(
    name = "exprank",
    version,
    about = "Build explanation-ranking datasets from review corpora and benchmark rankers on them"
)]
pub struct Cli {
    /// `key = value` config file; explicit flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the two-file dataset from a raw JSON-lines review corpus.
    Build(commands::build::BuildArgs),
    /// Print statistics of a built dataset.
    Stats(commands::stats::StatsArgs),
    /// Derive coverage-constrained train/test splits from a dataset.
    Split(commands::split::SplitArgs),
    /// Train a latent factor model (CD or PITF) on one training split.
    Train(commands::train::TrainArgs),
    /// Evaluate one method on one train/test split.
    Eval(commands::eval::EvalArgs),
    /// Run the full method comparison over fresh splits.
    Bench(commands::bench::BenchArgs),
    /// Print ranked explanations for one user-item pair.
    Rank(commands::rank::RankArgs),
}

/// Parse and run a full command line, returning the process exit code:
/// 0 success, 1 usage error, 2 data error, 3 numeric failure.
pub fn run_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code(&err)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::empty(),
    };
    if let Some(threads) = cli.threads.or(cfg.get("threads")?) {
        if threads == 0 {
            return Err(UsageError("--threads must be at least 1".into()).into());
        }
        // Only the first configuration in a process can win; later calls
        // (e.g. repeated in-process runs from tests) keep the first pool.
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    match cli.command {
        Command::Build(args) => commands::build::run(args, &cfg),
        Command::Stats(args) => commands::stats::run(args, &cfg),
        Command::Split(args) => commands::split::run(args, &cfg),
        Command::Train(args) => commands::train::run(args, &cfg),
        Command::Eval(args) => commands::eval::run(args, &cfg),
        Command::Bench(args) => commands::bench::run(args, &cfg),
        Command::Rank(args) => commands::rank::run(args, &cfg),
    }
}

fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return 1;
        }
        if let Some(core) = cause.downcast_ref::<exprank::Error>() {
            return match core {
                exprank::Error::NonFinite(_) => 3,
                _ => 2,
            };
        }
    }
    2
}
