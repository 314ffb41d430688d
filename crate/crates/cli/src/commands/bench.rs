//! `exprank bench`: the full method comparison. Draws fresh
//! coverage-constrained splits, trains or builds every requested method on
//! each training side, grades it on the matching test side, and reports
//! per-split tables plus the mean over splits.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;

use exprank::dataset::{load_dataset, make_splits};
use exprank::eval::{evaluate, MetricsReport};
use exprank::rankers::TrainConfig;

use crate::commands::{
    build_scorer, metrics_entries, metrics_header, metrics_row, parse_model_list, LatentParams,
    Mode, ModelKind,
};
use crate::config::{
    resolve, resolve_optional, resolve_required, sibling_provenance, write_provenance, ConfigFile,
};
use crate::{table, UsageError};

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory holding IDs.txt and id2exp.txt.
    #[arg(long, value_name = "DIR")]
    pub data: Option<PathBuf>,
    /// Comma-separated methods to compare (default: all five).
    #[arg(long, value_name = "LIST")]
    pub models: Option<String>,
    /// Number of fresh train/test splits.
    #[arg(long, value_name = "K")]
    pub splits: Option<usize>,
    /// Fraction of triplets drawn into each training side.
    #[arg(long, value_name = "F")]
    pub train_fraction: Option<f64>,
    /// Master seed for splits, training and the rand scorer.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Factor dimensionality d for cd and pitf.
    #[arg(long, value_name = "D")]
    pub dim: Option<usize>,
    /// Regularization weight λ for cd and pitf.
    #[arg(long, value_name = "L")]
    pub lambda: Option<f64>,
    /// Learning rate γ for cd and pitf.
    #[arg(long, value_name = "G")]
    pub gamma: Option<f64>,
    /// Full training passes T for cd and pitf.
    #[arg(long, value_name = "T")]
    pub iters: Option<usize>,
    /// List length N for the @N metrics.
    #[arg(long, value_name = "N")]
    pub topn: Option<usize>,
    /// Candidate pool: global or item.
    #[arg(long, value_name = "MODE")]
    pub mode: Option<Mode>,
    /// Optional metrics file to write (`key = value` lines).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

pub fn run(args: BenchArgs, cfg: &ConfigFile) -> Result<()> {
    let defaults = TrainConfig::default();
    let data: PathBuf = resolve_required(args.data, cfg, "data")?;
    let models = match resolve_optional(args.models, cfg, "models")? {
        Some(raw) => parse_model_list(&raw).map_err(UsageError)?,
        None => ModelKind::ALL.to_vec(),
    };
    let n_splits = resolve(args.splits, cfg, "splits", 5)?;
    let train_fraction = resolve(args.train_fraction, cfg, "train-fraction", 0.7)?;
    let seed = resolve(args.seed, cfg, "seed", 0u64)?;
    let latent = LatentParams {
        d: resolve(args.dim, cfg, "dim", defaults.d)?,
        lambda: resolve(args.lambda, cfg, "lambda", defaults.lambda)?,
        gamma: resolve(args.gamma, cfg, "gamma", defaults.gamma)?,
        iters: resolve(args.iters, cfg, "iters", defaults.iters)?,
    };
    let topn = resolve(args.topn, cfg, "topn", 10)?;
    let mode = resolve(args.mode, cfg, "mode", Mode::Global)?;
    let out: Option<PathBuf> = resolve_optional(args.out, cfg, "out")?;
    latent.validate()?;
    if n_splits < 1 {
        return Err(UsageError("--splits must be at least 1".into()).into());
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(UsageError("--train-fraction must lie strictly between 0 and 1".into()).into());
    }
    if topn == 0 {
        return Err(UsageError("--topn must be at least 1".into()).into());
    }

    let dataset = load_dataset(&data)?;
    let splits = make_splits(&dataset, train_fraction, n_splits, seed)?;

    // reports[m][k] = metrics of method m on split k.
    let mut reports: Vec<Vec<MetricsReport>> = vec![Vec::new(); models.len()];
    for (k, split) in splits.iter().enumerate() {
        for (m, &model) in models.iter().enumerate() {
            eprintln!(
                "split {}/{}: {} ({} train / {} test triplets)",
                k + 1,
                splits.len(),
                model.label(),
                split.train.len(),
                split.test.len()
            );
            let scorer = build_scorer(
                model,
                &dataset,
                &split.train,
                &latent,
                seed.wrapping_add(k as u64),
            )
            .with_context(|| format!("building {} on split {}", model.label(), k + 1))?;
            let report = evaluate(
                &scorer,
                &split.train,
                &split.test,
                dataset.explanations.len(),
                mode.to_core(),
                topn,
            )
            .with_context(|| format!("evaluating {} on split {}", model.label(), k + 1))?;
            reports[m].push(report);
        }
    }

    let header = metrics_header(topn);
    for k in 0..splits.len() {
        let rows: Vec<Vec<String>> = models
            .iter()
            .enumerate()
            .map(|(m, model)| metrics_row(model.label(), &reports[m][k]))
            .collect();
        println!("split {}", k + 1);
        println!("{}", table::render(&header, &rows));
    }

    let means: Vec<MetricsReport> = reports
        .iter()
        .map(|per_split| mean_report(per_split))
        .collect();
    let rows: Vec<Vec<String>> = models
        .iter()
        .zip(&means)
        .map(|(model, report)| metrics_row(model.label(), report))
        .collect();
    println!("mean over {} splits", splits.len());
    println!("{}", table::render(&header, &rows));

    if let Some(out) = out {
        let mut entries: Vec<(String, String)> = vec![
            ("splits".to_string(), splits.len().to_string()),
            ("topn".to_string(), topn.to_string()),
            ("mode".to_string(), mode.to_string()),
        ];
        for (m, model) in models.iter().enumerate() {
            for (k, report) in reports[m].iter().enumerate() {
                entries.extend(metrics_entries(
                    &format!("{}.split{}", model.name(), k + 1),
                    report,
                ));
            }
            entries.extend(metrics_entries(
                &format!("{}.mean", model.name()),
                &means[m],
            ));
        }
        write_provenance(&out, "bench metrics", &entries)?;
        let model_list: Vec<&str> = models.iter().map(|m| m.name()).collect();
        write_provenance(
            &sibling_provenance(&out),
            "bench",
            &[
                ("data", data.display().to_string()),
                ("models", model_list.join(",")),
                ("splits", n_splits.to_string()),
                ("train-fraction", train_fraction.to_string()),
                ("seed", seed.to_string()),
                ("dim", latent.d.to_string()),
                ("lambda", latent.lambda.to_string()),
                ("gamma", latent.gamma.to_string()),
                ("iters", latent.iters.to_string()),
                ("topn", topn.to_string()),
                ("mode", mode.to_string()),
            ],
        )?;
        println!("metrics written to {}", out.display());
    }
    Ok(())
}

/// Arithmetic mean of per-split reports; pair counts are summed.
fn mean_report(reports: &[MetricsReport]) -> MetricsReport {
    let n = reports.len() as f64;
    MetricsReport {
        ndcg_at_n: reports.iter().map(|r| r.ndcg_at_n).sum::<f64>() / n,
        precision_at_n: reports.iter().map(|r| r.precision_at_n).sum::<f64>() / n,
        recall_at_n: reports.iter().map(|r| r.recall_at_n).sum::<f64>() / n,
        f1_at_n: reports.iter().map(|r| r.f1_at_n).sum::<f64>() / n,
        n_pairs_evaluated: reports.iter().map(|r| r.n_pairs_evaluated).sum(),
    }
}
