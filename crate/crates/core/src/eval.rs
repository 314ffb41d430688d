//! Ranked-list construction and retrieval metrics.
//!
//! Every ranker exposes the [`Scorer`] interface; this module turns scores
//! into top-N explanation lists (either over the whole explanation
//! vocabulary or over the explanations an item is known to have) and grades
//! them against held-out triplets with NDCG, precision, recall, and F1,
//! averaged per (user, item) pair and reported in percent.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::Triplet;
use crate::error::{Error, Result};

/// Anything that can assign a relevance score to a (user, item,
/// explanation) triple. Higher is better; ties are broken by ascending
/// explanation index when lists are built.
pub trait Scorer: Sync {
    fn score(&self, u: u32, i: u32, e: u32) -> f64;

    /// Score many candidate explanations for one (user, item) pair.
    /// Implementations override this when batch scoring is cheaper than
    /// repeated pointwise calls.
    fn score_candidates(&self, u: u32, i: u32, candidates: &[u32]) -> Vec<f64> {
        candidates.iter().map(|&e| self.score(u, i, e)).collect()
    }
}

/// A scored top-N list for one (user, item) pair. `explanations` is sorted
/// best-first and `scores` is its parallel array.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    pub pair: (u32, u32),
    pub explanations: Vec<u32>,
    pub scores: Vec<f64>,
}

/// Heap entry ordered by goodness: higher score first, then lower
/// explanation index.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    score: f64,
    exp: u32,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| other.exp.cmp(&self.exp))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Top `n` of the given candidates, selected with a bounded min-heap so
/// only n entries are ever kept, in O(c·log n).
pub fn top_n_item(scorer: &dyn Scorer, u: u32, i: u32, candidates: &[u32], n: usize) -> RankedList {
    let scores = scorer.score_candidates(u, i, candidates);
    let mut heap: BinaryHeap<Reverse<Entry>> = BinaryHeap::with_capacity(n + 1);
    for (&exp, &score) in candidates.iter().zip(&scores) {
        let entry = Entry { score, exp };
        if heap.len() < n {
            heap.push(Reverse(entry));
        } else if let Some(Reverse(worst)) = heap.peek() {
            if entry > *worst {
                heap.pop();
                heap.push(Reverse(entry));
            }
        }
    }
    let mut entries: Vec<Entry> = heap.into_iter().map(|Reverse(e)| e).collect();
    entries.sort_unstable_by(|a, b| b.cmp(a));
    RankedList {
        pair: (u, i),
        explanations: entries.iter().map(|e| e.exp).collect(),
        scores: entries.iter().map(|e| e.score).collect(),
    }
}

/// Top `n` over the entire explanation vocabulary 0..n_explanations.
pub fn top_n_global(
    scorer: &dyn Scorer,
    u: u32,
    i: u32,
    n_explanations: usize,
    n: usize,
) -> RankedList {
    let candidates: Vec<u32> = (0..n_explanations as u32).collect();
    top_n_item(scorer, u, i, &candidates, n)
}

/// Binary-gain NDCG@n: each relevant explanation at rank r contributes
/// 1/log2(r+1), normalized by the DCG of a perfect list, whose length is
/// min(|relevant|, n). Returns a fraction in [0, 1].
pub fn ndcg_at_n(ranked: &[u32], relevant: &BTreeSet<u32>, n: usize) -> f64 {
    if relevant.is_empty() {
        return 0.0;
    }
    let dcg: f64 = ranked
        .iter()
        .take(n)
        .enumerate()
        .filter(|(_, e)| relevant.contains(e))
        .map(|(idx, _)| 1.0 / ((idx + 2) as f64).log2())
        .sum();
    let ideal: f64 = (0..relevant.len().min(n))
        .map(|idx| 1.0 / ((idx + 2) as f64).log2())
        .sum();
    dcg / ideal
}

/// Precision, recall, and F1 at n, each a fraction in [0, 1]. Precision
/// divides by n even when fewer candidates were available; recall divides
/// by the ground-truth size; F1 is 0 when both are 0.
pub fn precision_recall_f1_at_n(
    ranked: &[u32],
    relevant: &BTreeSet<u32>,
    n: usize,
) -> (f64, f64, f64) {
    if n == 0 || relevant.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let hits = ranked
        .iter()
        .take(n)
        .filter(|e| relevant.contains(e))
        .count();
    let precision = hits as f64 / n as f64;
    let recall = hits as f64 / relevant.len() as f64;
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    (precision, recall, f1)
}

/// Which candidate pool ranked lists are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankingMode {
    /// Rank every explanation in the vocabulary.
    Global,
    /// Rank only the explanations the item carries in the training split.
    Item,
}

/// Mean metrics over all evaluated (user, item) pairs, in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsReport {
    pub ndcg_at_n: f64,
    pub precision_at_n: f64,
    pub recall_at_n: f64,
    pub f1_at_n: f64,
    pub n_pairs_evaluated: usize,
}

/// Grade a scorer against a held-out split.
///
/// Test triplets are grouped by (user, item); each distinct pair is scored
/// once against the union of its held-out explanations, and the report
/// averages the per-pair metrics (including per-pair F1, not the F1 of the
/// averages) and scales them to percent. Pairs are processed in a fixed
/// order, so results are reproducible.
pub fn evaluate(
    scorer: &dyn Scorer,
    train: &[Triplet],
    test: &[Triplet],
    n_explanations: usize,
    mode: RankingMode,
    top_n: usize,
) -> Result<MetricsReport> {
    if test.is_empty() {
        return Err(Error::EmptyTestSplit);
    }
    if top_n == 0 {
        return Err(Error::InvalidConfig("top_n must be at least 1".into()));
    }
    for t in train.iter().chain(test) {
        if t.explanation as usize >= n_explanations {
            return Err(Error::UnknownEntity {
                kind: "explanation",
                id: t.explanation.to_string(),
            });
        }
    }

    let mut by_pair: BTreeMap<(u32, u32), BTreeSet<u32>> = BTreeMap::new();
    for t in test {
        by_pair
            .entry((t.user, t.item))
            .or_default()
            .insert(t.explanation);
    }
    let pairs: Vec<((u32, u32), BTreeSet<u32>)> = by_pair.into_iter().collect();

    // In item mode each pair ranks only the explanations its item carries
    // in training; items absent from training have nothing to rank.
    let mut item_candidates: HashMap<u32, Vec<u32>> = HashMap::new();
    if mode == RankingMode::Item {
        for t in train {
            item_candidates
                .entry(t.item)
                .or_default()
                .push(t.explanation);
        }
        for exps in item_candidates.values_mut() {
            exps.sort_unstable();
            exps.dedup();
        }
    }
    let all_candidates: Vec<u32> = match mode {
        RankingMode::Global => (0..n_explanations as u32).collect(),
        RankingMode::Item => Vec::new(),
    };

    let per_pair: Vec<(f64, f64, f64, f64)> = pairs
        .par_iter()
        .map(|((u, i), relevant)| {
            let candidates: &[u32] = match mode {
                RankingMode::Global => &all_candidates,
                RankingMode::Item => item_candidates.get(i).map_or(&[], Vec::as_slice),
            };
            let ranked = top_n_item(scorer, *u, *i, candidates, top_n);
            let ndcg = ndcg_at_n(&ranked.explanations, relevant, top_n);
            let (p, r, f1) = precision_recall_f1_at_n(&ranked.explanations, relevant, top_n);
            (ndcg, p, r, f1)
        })
        .collect();

    let count = per_pair.len() as f64;
    let mut sums = (0.0, 0.0, 0.0, 0.0);
    for (ndcg, p, r, f1) in per_pair {
        sums.0 += ndcg;
        sums.1 += p;
        sums.2 += r;
        sums.3 += f1;
    }
    Ok(MetricsReport {
        ndcg_at_n: 100.0 * sums.0 / count,
        precision_at_n: 100.0 * sums.1 / count,
        recall_at_n: 100.0 * sums.2 / count,
        f1_at_n: 100.0 * sums.3 / count,
        n_pairs_evaluated: pairs.len(),
    })
}
