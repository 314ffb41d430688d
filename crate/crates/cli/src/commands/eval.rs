//! `exprank eval`: score one method against a test split and report ranking
//! metrics.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;

use exprank::dataset::{load_dataset, read_split_file};
use exprank::eval::evaluate;
use exprank::rankers::{load_checkpoint, NeighborIndex, RandScorer, Variant};

use crate::commands::{metrics_entries, metrics_header, metrics_row, AnyScorer, Mode, ModelKind};
use crate::config::{
    resolve, resolve_optional, resolve_required, sibling_provenance, write_provenance, ConfigFile,
};
use crate::{table, UsageError};

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Directory holding IDs.txt and id2exp.txt.
    #[arg(long, value_name = "DIR")]
    pub data: Option<PathBuf>,
    /// Training split file.
    #[arg(long, value_name = "FILE")]
    pub train: Option<PathBuf>,
    /// Test split file.
    #[arg(long, value_name = "FILE")]
    pub test: Option<PathBuf>,
    /// Method to evaluate: rand, rucf, ricf, cd or pitf.
    #[arg(long, value_name = "MODEL")]
    pub model: Option<ModelKind>,
    /// Checkpoint file (required for cd and pitf).
    #[arg(long, value_name = "FILE")]
    pub checkpoint: Option<PathBuf>,
    /// List length N for the @N metrics.
    #[arg(long, value_name = "N")]
    pub topn: Option<usize>,
    /// Candidate pool: global (whole vocabulary) or item (explanations seen
    /// with the item in training).
    #[arg(long, value_name = "MODE")]
    pub mode: Option<Mode>,
    /// Seed for the rand scorer.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Optional metrics file to write (`key = value` lines).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

pub fn run(args: EvalArgs, cfg: &ConfigFile) -> Result<()> {
    let data: PathBuf = resolve_required(args.data, cfg, "data")?;
    let train_path: PathBuf = resolve_required(args.train, cfg, "train")?;
    let test_path: PathBuf = resolve_required(args.test, cfg, "test")?;
    let model: ModelKind = resolve_required(args.model, cfg, "model")?;
    let checkpoint: Option<PathBuf> = resolve_optional(args.checkpoint, cfg, "checkpoint")?;
    let topn = resolve(args.topn, cfg, "topn", 10)?;
    let mode = resolve(args.mode, cfg, "mode", Mode::Global)?;
    let seed = resolve(args.seed, cfg, "seed", 0u64)?;
    let out: Option<PathBuf> = resolve_optional(args.out, cfg, "out")?;
    if topn == 0 {
        return Err(UsageError("--topn must be at least 1".into()).into());
    }

    let dataset = load_dataset(&data)?;
    let train = read_split_file(&dataset, &train_path)?;
    let test = read_split_file(&dataset, &test_path)?;

    let scorer = match model {
        ModelKind::Rand => AnyScorer::Rand(RandScorer { seed }),
        ModelKind::Rucf | ModelKind::Ricf => {
            let index = NeighborIndex::from_triplets(
                &train,
                dataset.users.len(),
                dataset.items.len(),
                dataset.explanations.len(),
            )?;
            if model == ModelKind::Rucf {
                AnyScorer::Rucf(index)
            } else {
                AnyScorer::Ricf(index)
            }
        }
        ModelKind::Cd | ModelKind::Pitf => {
            let path = checkpoint
                .as_ref()
                .ok_or_else(|| UsageError(format!("--model {model} needs --checkpoint FILE")))?;
            let loaded = load_checkpoint(path)
                .with_context(|| format!("loading checkpoint {}", path.display()))?;
            let expected = if model == ModelKind::Cd {
                Variant::Cd
            } else {
                Variant::Pitf
            };
            if loaded.variant() != expected {
                return Err(exprank::Error::VariantMismatch {
                    expected: expected.to_string(),
                    got: loaded.variant().to_string(),
                }
                .into());
            }
            if loaded.n_users() != dataset.users.len()
                || loaded.n_items() != dataset.items.len()
                || loaded.n_explanations() != dataset.explanations.len()
            {
                bail!(
                    "checkpoint {} was trained on {} users / {} items / {} explanations, \
                     but {} holds {} / {} / {}",
                    path.display(),
                    loaded.n_users(),
                    loaded.n_items(),
                    loaded.n_explanations(),
                    data.display(),
                    dataset.users.len(),
                    dataset.items.len(),
                    dataset.explanations.len()
                );
            }
            AnyScorer::Latent(loaded)
        }
    };

    let report = evaluate(
        &scorer,
        &train,
        &test,
        dataset.explanations.len(),
        mode.to_core(),
        topn,
    )?;

    println!(
        "{}",
        table::render(
            &metrics_header(topn),
            &[metrics_row(model.label(), &report)]
        )
    );
    println!("pairs evaluated: {}", report.n_pairs_evaluated);

    if let Some(out) = out {
        let mut entries = vec![
            ("model".to_string(), model.to_string()),
            ("mode".to_string(), mode.to_string()),
            ("topn".to_string(), topn.to_string()),
        ];
        entries.extend(metrics_entries(model.name(), &report));
        write_provenance(&out, "eval metrics", &entries)?;
        write_provenance(
            &sibling_provenance(&out),
            "eval",
            &[
                ("data", data.display().to_string()),
                ("train", train_path.display().to_string()),
                ("test", test_path.display().to_string()),
                ("model", model.to_string()),
                ("topn", topn.to_string()),
                ("mode", mode.to_string()),
                ("seed", seed.to_string()),
            ],
        )?;
        println!("metrics written to {}", out.display());
    }
    Ok(())
}
