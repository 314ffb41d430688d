//! `exprank rank`: print the ranked explanation list a trained checkpoint
//! produces for one user-item pair, with the weakest candidates alongside
//! for contrast.

use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;

use exprank::dataset::{load_dataset, read_split_file, Dataset};
use exprank::eval::Scorer;
use exprank::rankers::load_checkpoint;

use crate::config::{resolve, resolve_optional, resolve_required, ConfigFile};
use crate::UsageError;

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Directory holding IDs.txt and id2exp.txt.
    #[arg(long, value_name = "DIR")]
    pub data: Option<PathBuf>,
    /// Trained checkpoint file (cd or pitf).
    #[arg(long, value_name = "FILE")]
    pub checkpoint: Option<PathBuf>,
    /// User ID, as spelled in the dataset.
    #[arg(long, value_name = "ID")]
    pub user: Option<String>,
    /// Item ID, as spelled in the dataset.
    #[arg(long, value_name = "ID")]
    pub item: Option<String>,
    /// How many explanations to show from each end of the ranking.
    #[arg(long, value_name = "N")]
    pub topn: Option<usize>,
    /// Optional test split; its explanations for this pair are starred.
    #[arg(long, value_name = "FILE")]
    pub test: Option<PathBuf>,
}

pub fn run(args: RankArgs, cfg: &ConfigFile) -> Result<()> {
    let data: PathBuf = resolve_required(args.data, cfg, "data")?;
    let checkpoint: PathBuf = resolve_required(args.checkpoint, cfg, "checkpoint")?;
    let user: String = resolve_required(args.user, cfg, "user")?;
    let item: String = resolve_required(args.item, cfg, "item")?;
    let topn = resolve(args.topn, cfg, "topn", 5)?;
    let test: Option<PathBuf> = resolve_optional(args.test, cfg, "test")?;
    if topn == 0 {
        return Err(UsageError("--topn must be at least 1".into()).into());
    }

    let dataset = load_dataset(&data)?;
    let model = load_checkpoint(&checkpoint)
        .with_context(|| format!("loading checkpoint {}", checkpoint.display()))?;
    if model.n_users() != dataset.users.len()
        || model.n_items() != dataset.items.len()
        || model.n_explanations() != dataset.explanations.len()
    {
        bail!(
            "checkpoint {} was trained on {} users / {} items / {} explanations, \
             but {} holds {} / {} / {}",
            checkpoint.display(),
            model.n_users(),
            model.n_items(),
            model.n_explanations(),
            data.display(),
            dataset.users.len(),
            dataset.items.len(),
            dataset.explanations.len()
        );
    }

    let u = lookup(&dataset.users, &user, "user")?;
    let i = lookup(&dataset.items, &item, "item")?;

    let held_out: BTreeSet<u32> = match &test {
        Some(path) => read_split_file(&dataset, path)?
            .into_iter()
            .filter(|t| t.user == u && t.item == i)
            .map(|t| t.explanation)
            .collect(),
        None => BTreeSet::new(),
    };

    let candidates: Vec<u32> = (0..dataset.explanations.len() as u32).collect();
    let scores = model.score_candidates(u, i, &candidates);
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    let n = order.len();
    println!(
        "{} ranking of {} explanations for user {user} / item {item}",
        model.variant(),
        n
    );
    if topn * 2 >= n {
        print_rows(&dataset, &order, &scores, 0, n, &held_out);
    } else {
        println!("top {topn}:");
        print_rows(&dataset, &order, &scores, 0, topn, &held_out);
        println!("bottom {topn}:");
        print_rows(&dataset, &order, &scores, n - topn, n, &held_out);
    }
    if test.is_some() {
        println!("(* = held-out explanation for this pair)");
    }
    Ok(())
}

/// Resolve a raw ID against one vocabulary, hinting at the dataset's ID
/// spelling when the lookup fails.
fn lookup(vocab: &exprank::dataset::Vocab, id: &str, kind: &str) -> Result<u32> {
    vocab.index_of(id).ok_or_else(|| {
        let example = vocab.id_of(0).unwrap_or("<none>");
        anyhow!("unknown {kind} ID {id:?}; this dataset's {kind} IDs look like {example:?}")
    })
}

/// Print ranks `from..to` of the ordering, one line each.
fn print_rows(
    dataset: &Dataset,
    order: &[usize],
    scores: &[f64],
    from: usize,
    to: usize,
    held_out: &BTreeSet<u32>,
) {
    let id_width = order[from..to]
        .iter()
        .filter_map(|&idx| dataset.explanations.id_of(idx as u32))
        .map(str::len)
        .max()
        .unwrap_or(0);
    for (rank, &idx) in order[from..to]
        .iter()
        .enumerate()
        .map(|(o, v)| (from + o + 1, v))
    {
        let e = idx as u32;
        let id = dataset.explanations.id_of(e).unwrap_or("?");
        let text = dataset.exp_text.get(id).map(String::as_str).unwrap_or("");
        let mark = if held_out.contains(&e) { " *" } else { "" };
        println!(
            "{rank:>5}  {:>12.6}  {id:>id_width$}  {text}{mark}",
            scores[idx]
        );
    }
}
