//! Greedy extraction of near-duplicate sentence groups.
//!
//! Every sentence is signed and inserted into the LSH index; sentences are
//! then visited in ascending id order. Each still-indexed sentence queries
//! the index, the whole result set is removed (whether or not it is kept),
//! and the group survives only when it holds strictly more than
//! `min_group_size` members. The query seed becomes the group's
//! representative explanation. Removal-on-query makes kept groups pairwise
//! disjoint and bounds the work at one query per sentence.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ingest::Sentence;
use crate::lsh::LshIndex;
use crate::minhash::{shingles, MinHashSignature, MinHasher};

/// Knobs of the grouping pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupingConfig {
    /// Shingle size n.
    pub shingle_size: usize,
    /// Similarity threshold t.
    pub threshold: f64,
    /// Groups must be strictly larger than this to survive.
    pub min_group_size: usize,
    /// MinHash permutation count k.
    pub num_perm: usize,
    /// Seed of the hash family.
    pub seed: u64,
}

impl Default for GroupingConfig {
    fn default() -> Self {
        GroupingConfig {
            shingle_size: 2,
            threshold: 0.9,
            min_group_size: 5,
            num_perm: 128,
            seed: 0,
        }
    }
}

impl GroupingConfig {
    fn validate(&self) -> Result<()> {
        if self.shingle_size < 1 {
            return Err(Error::InvalidConfig(
                "shingle_size must be at least 1".into(),
            ));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "threshold must lie strictly between 0 and 1, got {}",
                self.threshold
            )));
        }
        if self.min_group_size < 1 {
            return Err(Error::InvalidConfig(
                "min_group_size must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// One kept group of near-duplicate sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplanationGroup {
    /// Sentence id of the representative (the query seed).
    pub explanation_id: u64,
    /// All sentence ids the representative's query matched, itself included.
    pub member_ids: BTreeSet<u64>,
    /// `member_ids.len()`, the group's occurrence count.
    pub occurrence: usize,
}

/// The representative of a group: the sentence whose query produced it.
/// Under ascending-id iteration that is always the smallest member — every
/// smaller id was already queried-and-removed by the time the seed ran.
pub fn select_representative(group_member_ids: &BTreeSet<u64>) -> u64 {
    *group_member_ids
        .iter()
        .next()
        .expect("groups are non-empty by construction")
}

/// Run the greedy grouping pass over pre-filtered sentences.
///
/// Returns the kept groups in ascending representative order, plus a map
/// from every member of every kept group to its group's representative.
/// Sentences whose groups were too small are absent from the map.
pub fn group_sentences(
    sentences: &[Sentence],
    config: &GroupingConfig,
) -> Result<(Vec<ExplanationGroup>, HashMap<u64, u64>)> {
    config.validate()?;
    let hasher = MinHasher::new(config.num_perm, config.seed)?;

    // Signatures are pure per sentence; build them in parallel, then order
    // by id for the sequential greedy loop.
    let mut signed: Vec<(u64, MinHashSignature)> = sentences
        .par_iter()
        .map(|s| {
            (
                s.sentence_id,
                hasher.signature(&shingles(&s.text, config.shingle_size)),
            )
        })
        .collect();
    signed.sort_unstable_by_key(|(id, _)| *id);

    let mut index = LshIndex::new(config.threshold, config.num_perm, config.seed)?;
    for (id, sig) in &signed {
        index.insert(*id, sig.clone())?;
    }

    let mut groups = Vec::new();
    let mut assignment = HashMap::new();
    for (id, sig) in &signed {
        if !index.contains(*id) {
            // Already matched by an earlier query and removed.
            continue;
        }
        let members = index.query(sig)?;
        if members.len() > config.min_group_size {
            let member_ids: BTreeSet<u64> = members.iter().copied().collect();
            let representative = select_representative(&member_ids);
            debug_assert_eq!(representative, *id);
            for &m in &members {
                assignment.insert(m, representative);
            }
            groups.push(ExplanationGroup {
                explanation_id: representative,
                occurrence: member_ids.len(),
                member_ids,
            });
        }
        for &m in &members {
            index.remove(m)?;
        }
    }
    Ok((groups, assignment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minhash::{estimate_jaccard, minhash, ShingleSet};

    fn sentences(texts: &[&str]) -> Vec<Sentence> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| Sentence {
                sentence_id: i as u64,
                record_ref: i,
                text: t.to_string(),
            })
            .collect()
    }

    /// Exact-Jaccard mirror of the greedy loop: same ascending order, same
    /// remove-all-matches step, but membership decided by true shingle-set
    /// similarity instead of the LSH index.
    fn brute_force_groups(
        input: &[Sentence],
        config: &GroupingConfig,
    ) -> Vec<(u64, BTreeSet<u64>)> {
        let mut sets: Vec<(u64, ShingleSet)> = input
            .iter()
            .map(|s| (s.sentence_id, shingles(&s.text, config.shingle_size)))
            .collect();
        sets.sort_unstable_by_key(|(id, _)| *id);
        let mut active: BTreeSet<u64> = sets.iter().map(|(id, _)| *id).collect();
        let by_id: HashMap<u64, &ShingleSet> = sets.iter().map(|(id, s)| (*id, s)).collect();
        let mut out = Vec::new();
        for (id, set) in &sets {
            if !active.contains(id) {
                continue;
            }
            let members: BTreeSet<u64> = active
                .iter()
                .copied()
                .filter(|m| by_id[m].exact_jaccard(set) >= config.threshold)
                .collect();
            if members.len() > config.min_group_size {
                out.push((*id, members.clone()));
            }
            for m in &members {
                active.remove(m);
            }
        }
        out
    }

    #[test]
    fn six_copies_form_one_group_and_noise_is_dropped() {
        let mut texts = vec!["This is a wonderful movie"; 6];
        texts.push("The pasta arrived cold");
        let (groups, assignment) =
            group_sentences(&sentences(&texts), &GroupingConfig::default()).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].explanation_id, 0);
        assert_eq!(groups[0].occurrence, 6);
        assert_eq!(groups[0].member_ids, (0..6).collect());
        assert_eq!(assignment.len(), 6);
        assert!(assignment.values().all(|&r| r == 0));
        assert!(!assignment.contains_key(&6));
    }

    #[test]
    fn pairwise_dissimilar_sentences_yield_no_groups() {
        let texts = [
            "the hotel lobby sparkled with marble",
            "terrible acting ruined a decent plot",
            "our waiter forgot the drinks twice",
            "battery life barely lasts one morning",
            "beautiful trail views above the lake",
            "the sequel drops every interesting thread",
            "breakfast buffet closed far too early",
        ];
        let (groups, assignment) =
            group_sentences(&sentences(&texts), &GroupingConfig::default()).unwrap();
        assert!(groups.is_empty());
        assert!(assignment.is_empty());
    }

    #[test]
    fn empty_input_yields_empty_outputs() {
        let (groups, assignment) = group_sentences(&[], &GroupingConfig::default()).unwrap();
        assert!(groups.is_empty());
        assert!(assignment.is_empty());
    }

    #[test]
    fn representative_is_the_smallest_member() {
        assert_eq!(select_representative(&BTreeSet::from([7])), 7);
        assert_eq!(select_representative(&BTreeSet::from([42, 57, 99])), 42);
    }

    /// Build a few well-separated clusters (members identical up to a
    /// trailing token, so pairwise bigram Jaccard stays ≥ 0.9) and check the
    /// LSH pass against the exact-similarity greedy oracle.
    #[test]
    fn planted_clusters_match_the_exact_jaccard_oracle() {
        let mut texts: Vec<String> = Vec::new();
        for c in 0..5 {
            let base: Vec<String> = (0..30).map(|w| format!("c{c}word{w}")).collect();
            let size = 6 + 2 * c;
            for v in 0..size {
                let mut words = base.clone();
                if v % 2 == 1 {
                    words.push(format!("tail{v}"));
                }
                texts.push(words.join(" "));
            }
        }
        for nidx in 0..40 {
            texts.push(
                (0..12)
                    .map(|w| format!("noise{nidx}tok{w}"))
                    .collect::<Vec<_>>()
                    .join(" "),
            );
        }
        let input: Vec<Sentence> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Sentence {
                sentence_id: i as u64,
                record_ref: i,
                text: t.clone(),
            })
            .collect();

        let config = GroupingConfig::default();
        let (groups, assignment) = group_sentences(&input, &config).unwrap();
        let expected = brute_force_groups(&input, &config);

        assert_eq!(groups.len(), 5);
        assert_eq!(groups.len(), expected.len());
        for (got, (rep, members)) in groups.iter().zip(&expected) {
            assert_eq!(got.explanation_id, *rep);
            assert_eq!(&got.member_ids, members);
        }

        // Kept groups partition their members and never overlap.
        let mut seen = BTreeSet::new();
        for g in &groups {
            assert!(g.member_ids.contains(&g.explanation_id));
            assert_eq!(g.occurrence, g.member_ids.len());
            assert!(g.occurrence > config.min_group_size);
            for m in &g.member_ids {
                assert!(seen.insert(*m), "sentence {m} appears in two groups");
            }
        }

        // Every member estimates at least t against its representative.
        for (member, rep) in &assignment {
            let sm = minhash(
                &shingles(&input[*member as usize].text, config.shingle_size),
                config.num_perm,
                config.seed,
            )
            .unwrap();
            let sr = minhash(
                &shingles(&input[*rep as usize].text, config.shingle_size),
                config.num_perm,
                config.seed,
            )
            .unwrap();
            assert!(estimate_jaccard(&sm, &sr).unwrap() >= config.threshold);
        }
    }

    #[test]
    fn identical_inputs_group_identically() {
        let texts: Vec<String> = (0..8)
            .flat_map(|c| (0..7).map(move |_| format!("cluster {c} repeats the same sentence")))
            .collect();
        let refs: Vec<&str> = texts.iter().map(|s| s.as_str()).collect();
        let input = sentences(&refs);
        let config = GroupingConfig::default();
        let first = group_sentences(&input, &config).unwrap();
        let second = group_sentences(&input, &config).unwrap();
        assert_eq!(first.0, second.0);
        assert_eq!(first.1, second.1);
    }

    #[test]
    fn bad_configs_are_rejected() {
        let input = sentences(&["good food"]);
        for config in [
            GroupingConfig {
                shingle_size: 0,
                ..Default::default()
            },
            GroupingConfig {
                threshold: 0.0,
                ..Default::default()
            },
            GroupingConfig {
                threshold: 1.0,
                ..Default::default()
            },
            GroupingConfig {
                min_group_size: 0,
                ..Default::default()
            },
            GroupingConfig {
                num_perm: 4,
                ..Default::default()
            },
        ] {
            assert!(group_sentences(&input, &config).is_err(), "{config:?}");
        }
    }
}
