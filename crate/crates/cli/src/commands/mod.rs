//! Subcommand implementations and the types they share.

pub mod bench;
pub mod build;
pub mod eval;
pub mod rank;
pub mod split;
pub mod stats;
pub mod train;

use std::fmt;
use std::str::FromStr;

use anyhow::Result;
use clap::ValueEnum;

use exprank::dataset::{Dataset, Triplet};
use exprank::eval::{MetricsReport, RankingMode, Scorer};
use exprank::rankers::{
    train_bpr, LatentModel, NeighborIndex, RandScorer, RicfScorer, RucfScorer, TrainConfig, Variant,
};

use crate::UsageError;

/// Which ranking method a command refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Rand,
    Rucf,
    Ricf,
    Cd,
    Pitf,
}

impl ModelKind {
    /// Canonical benchmark order.
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Rand,
        ModelKind::Rucf,
        ModelKind::Ricf,
        ModelKind::Cd,
        ModelKind::Pitf,
    ];

    /// Flag/config spelling.
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Rand => "rand",
            ModelKind::Rucf => "rucf",
            ModelKind::Ricf => "ricf",
            ModelKind::Cd => "cd",
            ModelKind::Pitf => "pitf",
        }
    }

    /// Table spelling.
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Rand => "RAND",
            ModelKind::Rucf => "RUCF",
            ModelKind::Ricf => "RICF",
            ModelKind::Cd => "CD",
            ModelKind::Pitf => "PITF",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown model {s:?}; expected rand, rucf, ricf, cd or pitf"))
    }
}

/// Comma-separated model list (`rand,pitf`), deduplicated, order kept.
pub fn parse_model_list(s: &str) -> std::result::Result<Vec<ModelKind>, String> {
    let mut out: Vec<ModelKind> = Vec::new();
    for part in s.split(',') {
        let model: ModelKind = part.trim().parse()?;
        if !out.contains(&model) {
            out.push(model);
        }
    }
    if out.is_empty() {
        return Err("empty model list".into());
    }
    Ok(out)
}

/// Candidate pool for ranked lists; mirrors the core evaluation mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Rank the whole explanation vocabulary.
    Global,
    /// Rank only explanations the item carries in training.
    Item,
}

impl Mode {
    pub fn to_core(self) -> RankingMode {
        match self {
            Mode::Global => RankingMode::Global,
            Mode::Item => RankingMode::Item,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Global => "global",
            Mode::Item => "item",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "global" => Ok(Mode::Global),
            "item" => Ok(Mode::Item),
            other => Err(format!("unknown mode {other:?}; expected global or item")),
        }
    }
}

/// SGD hyper-parameters shared by `train`, `eval` and `bench`.
#[derive(Debug, Clone, Copy)]
pub struct LatentParams {
    pub d: usize,
    pub lambda: f64,
    pub gamma: f64,
    pub iters: usize,
}

impl LatentParams {
    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(UsageError("--dim must be at least 1".into()).into());
        }
        if self.lambda < 0.0 {
            return Err(UsageError("--lambda must be non-negative".into()).into());
        }
        if self.gamma <= 0.0 {
            return Err(UsageError("--gamma must be positive".into()).into());
        }
        if self.iters < 1 {
            return Err(UsageError("--iters must be at least 1".into()).into());
        }
        Ok(())
    }

    pub fn to_train_config(self, seed: u64) -> TrainConfig {
        TrainConfig {
            d: self.d,
            lambda: self.lambda,
            gamma: self.gamma,
            iters: self.iters,
            seed,
        }
    }
}

/// One scorer of any method, so commands can hold them uniformly.
pub enum AnyScorer {
    Rand(RandScorer),
    Rucf(NeighborIndex),
    Ricf(NeighborIndex),
    Latent(LatentModel),
}

impl Scorer for AnyScorer {
    fn score(&self, u: u32, i: u32, e: u32) -> f64 {
        match self {
            AnyScorer::Rand(s) => s.score(u, i, e),
            AnyScorer::Rucf(index) => RucfScorer { index }.score(u, i, e),
            AnyScorer::Ricf(index) => RicfScorer { index }.score(u, i, e),
            AnyScorer::Latent(model) => model.score(u, i, e),
        }
    }

    fn score_candidates(&self, u: u32, i: u32, candidates: &[u32]) -> Vec<f64> {
        match self {
            AnyScorer::Rand(s) => s.score_candidates(u, i, candidates),
            AnyScorer::Rucf(index) => RucfScorer { index }.score_candidates(u, i, candidates),
            AnyScorer::Ricf(index) => RicfScorer { index }.score_candidates(u, i, candidates),
            AnyScorer::Latent(model) => model.score_candidates(u, i, candidates),
        }
    }
}

/// Build (or train) the scorer for one method from a training split.
pub fn build_scorer(
    model: ModelKind,
    dataset: &Dataset,
    train: &[Triplet],
    latent: &LatentParams,
    seed: u64,
) -> Result<AnyScorer> {
    let n_users = dataset.users.len();
    let n_items = dataset.items.len();
    let n_explanations = dataset.explanations.len();
    Ok(match model {
        ModelKind::Rand => AnyScorer::Rand(RandScorer { seed }),
        ModelKind::Rucf => AnyScorer::Rucf(NeighborIndex::from_triplets(
            train,
            n_users,
            n_items,
            n_explanations,
        )?),
        ModelKind::Ricf => AnyScorer::Ricf(NeighborIndex::from_triplets(
            train,
            n_users,
            n_items,
            n_explanations,
        )?),
        ModelKind::Cd | ModelKind::Pitf => {
            let variant = if model == ModelKind::Cd {
                Variant::Cd
            } else {
                Variant::Pitf
            };
            let result = train_bpr(
                train,
                variant,
                n_users,
                n_items,
                n_explanations,
                &latent.to_train_config(seed),
            )?;
            AnyScorer::Latent(result.model)
        }
    })
}

/// Header for a metrics table at a given N.
pub fn metrics_header(topn: usize) -> Vec<String> {
    vec![
        "method".to_string(),
        format!("NDCG@{topn}"),
        format!("Pre@{topn}"),
        format!("Rec@{topn}"),
        format!("F1@{topn}"),
    ]
}

/// One metrics table row, three decimals as in the benchmark tables.
pub fn metrics_row(label: &str, report: &MetricsReport) -> Vec<String> {
    vec![
        label.to_string(),
        format!("{:.3}", report.ndcg_at_n),
        format!("{:.3}", report.precision_at_n),
        format!("{:.3}", report.recall_at_n),
        format!("{:.3}", report.f1_at_n),
    ]
}

/// Metric entries under a key prefix, for machine-readable metrics files.
pub fn metrics_entries(prefix: &str, report: &MetricsReport) -> Vec<(String, String)> {
    vec![
        (format!("{prefix}.ndcg"), report.ndcg_at_n.to_string()),
        (
            format!("{prefix}.precision"),
            report.precision_at_n.to_string(),
        ),
        (format!("{prefix}.recall"), report.recall_at_n.to_string()),
        (format!("{prefix}.f1"), report.f1_at_n.to_string()),
        (
            format!("{prefix}.pairs"),
            report.n_pairs_evaluated.to_string(),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_names_round_trip() {
        for model in ModelKind::ALL {
            assert_eq!(model.name().parse::<ModelKind>().unwrap(), model);
        }
        assert!("mf".parse::<ModelKind>().is_err());
    }

    #[test]
    fn model_lists_split_trim_and_dedup() {
        let models = parse_model_list("rand, pitf,rand").unwrap();
        assert_eq!(models, vec![ModelKind::Rand, ModelKind::Pitf]);
        assert!(parse_model_list("rand,,").is_err());
    }

    #[test]
    fn modes_parse_both_ways() {
        assert_eq!("global".parse::<Mode>().unwrap(), Mode::Global);
        assert_eq!("item".parse::<Mode>().unwrap(), Mode::Item);
        assert_eq!(Mode::Item.to_string(), "item");
        assert!("both".parse::<Mode>().is_err());
    }
}
