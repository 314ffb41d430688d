//! `exprank split`: derive coverage-constrained train/test splits and
//! write them as `splitK.train` / `splitK.test` files.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;

use exprank::dataset::{load_dataset, make_splits, write_split_files};

use crate::config::{resolve, resolve_required, write_provenance, ConfigFile};
use crate::UsageError;

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Directory holding IDs.txt and id2exp.txt.
    #[arg(long, value_name = "DIR")]
    pub data: Option<PathBuf>,
    /// Output directory for the split files.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Fraction of triplets drawn into each training split.
    #[arg(long, value_name = "F")]
    pub train_fraction: Option<f64>,
    /// Number of independent splits.
    #[arg(long, value_name = "K")]
    pub splits: Option<usize>,
    /// Master seed the per-split seeds are drawn from.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
}

pub fn run(args: SplitArgs, cfg: &ConfigFile) -> Result<()> {
    let data: PathBuf = resolve_required(args.data, cfg, "data")?;
    let out: PathBuf = resolve_required(args.out, cfg, "out")?;
    let train_fraction = resolve(args.train_fraction, cfg, "train-fraction", 0.7)?;
    let n_splits = resolve(args.splits, cfg, "splits", 5)?;
    let seed = resolve(args.seed, cfg, "seed", 0)?;
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(UsageError("--train-fraction must lie strictly between 0 and 1".into()).into());
    }
    if n_splits == 0 {
        return Err(UsageError("--splits must be at least 1".into()).into());
    }

    let dataset = load_dataset(&data)?;
    let splits = make_splits(&dataset, train_fraction, n_splits, seed)?;
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    write_split_files(&dataset, &splits, &out)?;
    write_provenance(
        &out.join("provenance.txt"),
        "split",
        &[
            ("data", data.display().to_string()),
            ("out", out.display().to_string()),
            ("train-fraction", train_fraction.to_string()),
            ("splits", n_splits.to_string()),
            ("seed", seed.to_string()),
        ],
    )?;

    let total: usize = splits[0].train.len() + splits[0].test.len();
    for (k, split) in splits.iter().enumerate() {
        println!(
            "split{}: {} train / {} test (realized fraction {:.4}, seed {})",
            k + 1,
            split.train.len(),
            split.test.len(),
            split.train.len() as f64 / total as f64,
            split.seed
        );
    }
    Ok(())
}
