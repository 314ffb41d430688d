//! `exprank train`: fit a CD or PITF model on one training split and save
//! a checkpoint.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use exprank::dataset::{load_dataset, read_split_file};
use exprank::rankers::{save_checkpoint, train_bpr, TrainConfig, Variant};

use crate::commands::{LatentParams, ModelKind};
use crate::config::{resolve, resolve_required, sibling_provenance, write_provenance, ConfigFile};
use crate::UsageError;

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Directory holding IDs.txt and id2exp.txt.
    #[arg(long, value_name = "DIR")]
    pub data: Option<PathBuf>,
    /// Training split file (`userID::itemID::expID` lines).
    #[arg(long, value_name = "FILE")]
    pub train: Option<PathBuf>,
    /// Model to fit: cd or pitf.
    #[arg(long, value_name = "MODEL")]
    pub model: Option<ModelKind>,
    /// Checkpoint file to write.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Factor dimensionality d.
    #[arg(long, value_name = "D")]
    pub dim: Option<usize>,
    /// Regularization weight λ.
    #[arg(long, value_name = "L")]
    pub lambda: Option<f64>,
    /// Learning rate γ.
    #[arg(long, value_name = "G")]
    pub gamma: Option<f64>,
    /// Full passes T over the training triplets.
    #[arg(long, value_name = "T")]
    pub iters: Option<usize>,
    /// Seed for initialization and sampling.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
}

pub fn run(args: TrainArgs, cfg: &ConfigFile) -> Result<()> {
    let defaults = TrainConfig::default();
    let data: PathBuf = resolve_required(args.data, cfg, "data")?;
    let train_path: PathBuf = resolve_required(args.train, cfg, "train")?;
    let model: ModelKind = resolve_required(args.model, cfg, "model")?;
    let out: PathBuf = resolve_required(args.out, cfg, "out")?;
    let latent = LatentParams {
        d: resolve(args.dim, cfg, "dim", defaults.d)?,
        lambda: resolve(args.lambda, cfg, "lambda", defaults.lambda)?,
        gamma: resolve(args.gamma, cfg, "gamma", defaults.gamma)?,
        iters: resolve(args.iters, cfg, "iters", defaults.iters)?,
    };
    latent.validate()?;
    let seed = resolve(args.seed, cfg, "seed", defaults.seed)?;
    let variant = match model {
        ModelKind::Cd => Variant::Cd,
        ModelKind::Pitf => Variant::Pitf,
        other => {
            return Err(UsageError(format!(
                "--model {other} has no trainable parameters; expected cd or pitf"
            ))
            .into())
        }
    };

    let dataset = load_dataset(&data)?;
    let train = read_split_file(&dataset, &train_path)?;
    eprintln!(
        "training {variant} (d={}, lambda={}, gamma={}, {} passes) on {} triplets",
        latent.d,
        latent.lambda,
        latent.gamma,
        latent.iters,
        train.len()
    );
    let result = train_bpr(
        &train,
        variant,
        dataset.users.len(),
        dataset.items.len(),
        dataset.explanations.len(),
        &latent.to_train_config(seed),
    )?;
    save_checkpoint(&result.model, &out)?;
    write_provenance(
        &sibling_provenance(&out),
        "train",
        &[
            ("data", data.display().to_string()),
            ("train", train_path.display().to_string()),
            ("model", model.to_string()),
            ("out", out.display().to_string()),
            ("dim", latent.d.to_string()),
            ("lambda", latent.lambda.to_string()),
            ("gamma", latent.gamma.to_string()),
            ("iters", latent.iters.to_string()),
            ("seed", seed.to_string()),
        ],
    )?;

    let first = result.loss_by_iter.first().copied().unwrap_or(0.0);
    let last = result.loss_by_iter.last().copied().unwrap_or(0.0);
    println!(
        "trained {variant} over {} passes: mean step loss {first:.6} → {last:.6}; checkpoint {}",
        result.loss_by_iter.len(),
        out.display()
    );
    Ok(())
}
