//! Dataset assembly, the two-file on-disk format, statistics, and splits.
//!
//! A dataset is a list of review records, each carrying the explanation IDs
//! assigned by grouping together with the raw sentence IDs they came from.
//! On disk it is two text files:
//!
//! * `IDs.txt` — one record per line,
//!   `userID::itemID::rating::timeStamp::expID:expID::senID:senID`
//!   (`::` between fields, `:` between multiple IDs);
//! * `id2exp.txt` — `expID::expSentence` lines covering every distinct
//!   expID *and* senID that appears in `IDs.txt`.
//!
//! Ranking operates on the distinct (user, item, explanation) triplets the
//! records induce; ratings and timestamps are carried for format fidelity
//! only.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::ingest::{RawRecord, Sentence};

/// Bidirectional map between external string IDs and dense `u32` indices,
/// in first-appearance order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocab {
    to_index: HashMap<String, u32>,
    ids: Vec<String>,
}

impl Vocab {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index of `id`, inserting it if unseen.
    pub fn intern(&mut self, id: &str) -> u32 {
        if let Some(&i) = self.to_index.get(id) {
            return i;
        }
        let i = u32::try_from(self.ids.len()).expect("vocabulary exceeds u32 range");
        self.to_index.insert(id.to_string(), i);
        self.ids.push(id.to_string());
        i
    }

    pub fn index_of(&self, id: &str) -> Option<u32> {
        self.to_index.get(id).copied()
    }

    pub fn id_of(&self, index: u32) -> Option<&str> {
        self.ids.get(index as usize).map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// One `(user, item, explanation)` interaction, as dense indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triplet {
    pub user: u32,
    pub item: u32,
    pub explanation: u32,
}

/// One review's surviving content: who, what, the carried rating/timestamp,
/// and the (explanation index, external sentence ID) pairs extracted from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetRecord {
    pub user: u32,
    pub item: u32,
    pub rating: u8,
    pub timestamp: i64,
    pub pairs: Vec<(u32, String)>,
}

/// In-memory dataset: vocabularies, records, and the ID → sentence-text map
/// backing `id2exp.txt`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub users: Vocab,
    pub items: Vocab,
    pub explanations: Vocab,
    pub records: Vec<DatasetRecord>,
    pub exp_text: HashMap<String, String>,
}

impl Dataset {
    /// Check the structural invariants the emitter relies on: every record
    /// has at least one pair, all indices resolve, every external ID is
    /// separator-free and has text.
    pub fn validate(&self) -> Result<()> {
        for record in &self.records {
            if record.pairs.is_empty() {
                return Err(Error::InvalidConfig(
                    "record with no explanation pairs".into(),
                ));
            }
            let user = self.users.id_of(record.user).ok_or(Error::UnknownEntity {
                kind: "user",
                id: record.user.to_string(),
            })?;
            let item = self.items.id_of(record.item).ok_or(Error::UnknownEntity {
                kind: "item",
                id: record.item.to_string(),
            })?;
            check_id(user)?;
            check_id(item)?;
            for (exp, sen) in &record.pairs {
                let exp_id = self.explanations.id_of(*exp).ok_or(Error::UnknownEntity {
                    kind: "explanation",
                    id: exp.to_string(),
                })?;
                check_id(exp_id)?;
                check_id(sen)?;
                for id in [exp_id, sen.as_str()] {
                    if !self.exp_text.contains_key(id) {
                        return Err(Error::UnknownEntity {
                            kind: "explanation text",
                            id: id.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// All distinct (user, item, explanation) triplets, ascending.
    pub fn triplets(&self) -> Vec<Triplet> {
        let set: BTreeSet<Triplet> = self
            .records
            .iter()
            .flat_map(|r| {
                r.pairs.iter().map(|(e, _)| Triplet {
                    user: r.user,
                    item: r.item,
                    explanation: *e,
                })
            })
            .collect();
        set.into_iter().collect()
    }
}

/// External IDs become format separators if they contain `:` — forbid that
/// (and line breaks, and empty IDs) up front.
fn check_id(id: &str) -> Result<()> {
    if id.is_empty() || id.contains(':') || id.contains('\n') || id.contains('\r') {
        return Err(Error::InvalidConfig(format!(
            "external ID {id:?} is empty or contains a separator character"
        )));
    }
    Ok(())
}

/// Assemble a dataset from parsed reviews, their extracted sentences, and
/// the grouping assignment (sentence ID → representative explanation ID).
/// Records none of whose sentences joined a kept group are dropped.
pub fn assemble(
    records: &[RawRecord],
    sentences: &[Sentence],
    assignment: &HashMap<u64, u64>,
) -> Dataset {
    let text_by_id: HashMap<u64, &str> = sentences
        .iter()
        .map(|s| (s.sentence_id, s.text.as_str()))
        .collect();
    let mut per_record: Vec<Vec<(u64, u64)>> = vec![Vec::new(); records.len()];
    let mut ordered: Vec<&Sentence> = sentences.iter().collect();
    ordered.sort_unstable_by_key(|s| s.sentence_id);
    for s in ordered {
        if let Some(&rep) = assignment.get(&s.sentence_id) {
            per_record[s.record_ref].push((rep, s.sentence_id));
        }
    }

    let mut dataset = Dataset::default();
    for (idx, raw) in records.iter().enumerate() {
        if per_record[idx].is_empty() {
            continue;
        }
        let user = dataset.users.intern(&raw.user_id);
        let item = dataset.items.intern(&raw.item_id);
        let pairs = per_record[idx]
            .iter()
            .map(|&(rep, sen)| {
                let rep_text = text_by_id
                    .get(&rep)
                    .expect("assignment references a sentence outside the input");
                let exp = dataset.explanations.intern(&rep.to_string());
                dataset
                    .exp_text
                    .insert(rep.to_string(), rep_text.to_string());
                dataset
                    .exp_text
                    .insert(sen.to_string(), text_by_id[&sen].to_string());
                (exp, sen.to_string())
            })
            .collect();
        dataset.records.push(DatasetRecord {
            user,
            item,
            rating: raw.rating,
            timestamp: raw.timestamp,
            pairs,
        });
    }
    dataset
}

/// Numeric-aware ID ordering for `id2exp.txt`: numeric IDs sort by value
/// (then text), before any non-numeric IDs.
fn id_order(a: &str, b: &str) -> std::cmp::Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => std::cmp::Ordering::Less,
        (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Write `IDs.txt` and `id2exp.txt` under `out_dir`.
pub fn emit_dataset(dataset: &Dataset, out_dir: &Path) -> Result<()> {
    dataset.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut ids_out = String::new();
    let mut referenced: Vec<&str> = Vec::new();
    for record in &dataset.records {
        let user = dataset.users.id_of(record.user).expect("validated");
        let item = dataset.items.id_of(record.item).expect("validated");
        let exps: Vec<&str> = record
            .pairs
            .iter()
            .map(|(e, _)| dataset.explanations.id_of(*e).expect("validated"))
            .collect();
        let sens: Vec<&str> = record.pairs.iter().map(|(_, s)| s.as_str()).collect();
        referenced.extend(&exps);
        referenced.extend(&sens);
        writeln!(
            ids_out,
            "{user}::{item}::{}::{}::{}::{}",
            record.rating,
            record.timestamp,
            exps.join(":"),
            sens.join(":")
        )
        .expect("writing to a String cannot fail");
    }
    let ids_path = out_dir.join("IDs.txt");
    fs::write(&ids_path, ids_out).map_err(|e| Error::io(&ids_path, e))?;

    referenced.sort_by(|a, b| id_order(a, b));
    referenced.dedup();
    let mut exp_out = String::new();
    for id in referenced {
        let text = dataset.exp_text.get(id).expect("validated");
        writeln!(exp_out, "{id}::{text}").expect("writing to a String cannot fail");
    }
    let exp_path = out_dir.join("id2exp.txt");
    fs::write(&exp_path, exp_out).map_err(|e| Error::io(&exp_path, e))?;
    Ok(())
}

/// Load a dataset from a directory holding `IDs.txt` and `id2exp.txt`.
/// Malformed input is reported with its file and 1-based line number.
pub fn load_dataset(dir: &Path) -> Result<Dataset> {
    let exp_path = dir.join("id2exp.txt");
    let exp_raw = fs::read_to_string(&exp_path).map_err(|e| Error::io(&exp_path, e))?;
    let mut exp_text = HashMap::new();
    for (idx, line) in exp_raw.lines().enumerate() {
        let (id, text) = line
            .split_once("::")
            .ok_or_else(|| Error::malformed(&exp_path, idx + 1, "expected `expID::expSentence`"))?;
        if exp_text.insert(id.to_string(), text.to_string()).is_some() {
            return Err(Error::malformed(
                &exp_path,
                idx + 1,
                format!("duplicate explanation ID {id}"),
            ));
        }
    }

    let ids_path = dir.join("IDs.txt");
    let ids_raw = fs::read_to_string(&ids_path).map_err(|e| Error::io(&ids_path, e))?;
    let mut dataset = Dataset {
        exp_text,
        ..Dataset::default()
    };
    for (idx, line) in ids_raw.lines().enumerate() {
        let line_no = idx + 1;
        let fields: Vec<&str> = line.split("::").collect();
        if fields.len() != 6 {
            return Err(Error::malformed(
                &ids_path,
                line_no,
                format!("expected 6 `::`-separated fields, got {}", fields.len()),
            ));
        }
        let rating: u8 = fields[2].parse().map_err(|_| {
            Error::malformed(&ids_path, line_no, format!("bad rating {:?}", fields[2]))
        })?;
        let timestamp: i64 = fields[3].parse().map_err(|_| {
            Error::malformed(&ids_path, line_no, format!("bad timestamp {:?}", fields[3]))
        })?;
        let exps: Vec<&str> = fields[4].split(':').collect();
        let sens: Vec<&str> = fields[5].split(':').collect();
        if fields[4].is_empty() || fields[5].is_empty() {
            return Err(Error::malformed(
                &ids_path,
                line_no,
                "record has no explanation IDs",
            ));
        }
        if exps.len() != sens.len() {
            return Err(Error::malformed(
                &ids_path,
                line_no,
                format!(
                    "{} explanation IDs vs {} sentence IDs",
                    exps.len(),
                    sens.len()
                ),
            ));
        }
        for id in exps.iter().chain(&sens) {
            if !dataset.exp_text.contains_key(*id) {
                return Err(Error::malformed(
                    &ids_path,
                    line_no,
                    format!("ID {id} has no entry in id2exp.txt"),
                ));
            }
        }
        let user = dataset.users.intern(fields[0]);
        let item = dataset.items.intern(fields[1]);
        let pairs = exps
            .iter()
            .zip(&sens)
            .map(|(e, s)| (dataset.explanations.intern(e), s.to_string()))
            .collect();
        dataset.records.push(DatasetRecord {
            user,
            item,
            rating,
            timestamp,
            pairs,
        });
    }
    Ok(dataset)
}

/// Corpus-level counts and the derived density/per-pair figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetStats {
    pub n_users: usize,
    pub n_items: usize,
    pub n_explanations: usize,
    pub n_pairs: usize,
    pub n_triplets: usize,
    /// n_triplets / n_pairs.
    pub exps_per_pair: f64,
    /// n_triplets / (n_users · n_items · n_explanations), as a raw fraction.
    pub density: f64,
}

impl DatasetStats {
    /// Density scaled by 10¹⁰, the customary display unit for these corpora.
    pub fn density_times_1e10(&self) -> f64 {
        self.density * 1e10
    }
}

/// Count users, items, explanations, distinct pairs and triplets.
pub fn compute_stats(dataset: &Dataset) -> DatasetStats {
    let triplets = dataset.triplets();
    let pairs: HashSet<(u32, u32)> = triplets.iter().map(|t| (t.user, t.item)).collect();
    let n_users = dataset.users.len();
    let n_items = dataset.items.len();
    let n_explanations = dataset.explanations.len();
    let cube = n_users as f64 * n_items as f64 * n_explanations as f64;
    DatasetStats {
        n_users,
        n_items,
        n_explanations,
        n_pairs: pairs.len(),
        n_triplets: triplets.len(),
        exps_per_pair: if pairs.is_empty() {
            0.0
        } else {
            triplets.len() as f64 / pairs.len() as f64
        },
        density: if cube == 0.0 {
            0.0
        } else {
            triplets.len() as f64 / cube
        },
    }
}

/// One train/test partition of the triplets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<Triplet>,
    pub test: Vec<Triplet>,
    /// The per-split RNG seed actually used (derived from the master seed).
    pub seed: u64,
}

/// Draw `n_splits` independent train/test partitions. Each starts from a
/// random `train_fraction` draw and then greedily moves test triplets into
/// train until every user, item, and explanation occurs in at least one
/// train triplet, so train can exceed the target by at most one triplet per
/// entity.
pub fn make_splits(
    dataset: &Dataset,
    train_fraction: f64,
    n_splits: usize,
    seed: u64,
) -> Result<Vec<Split>> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "train_fraction must lie strictly between 0 and 1, got {train_fraction}"
        )));
    }
    if n_splits < 1 {
        return Err(Error::InvalidConfig("n_splits must be at least 1".into()));
    }
    let triplets = dataset.triplets();

    // Every vocabulary entry must be reachable or coverage cannot hold.
    let mut user_seen = vec![false; dataset.users.len()];
    let mut item_seen = vec![false; dataset.items.len()];
    let mut exp_seen = vec![false; dataset.explanations.len()];
    for t in &triplets {
        user_seen[t.user as usize] = true;
        item_seen[t.item as usize] = true;
        exp_seen[t.explanation as usize] = true;
    }
    for (seen, vocab, kind) in [
        (&user_seen, &dataset.users, "user"),
        (&item_seen, &dataset.items, "item"),
        (&exp_seen, &dataset.explanations, "explanation"),
    ] {
        if let Some(idx) = seen.iter().position(|s| !s) {
            return Err(Error::CoverageUnsatisfiable {
                kind,
                id: vocab.id_of(idx as u32).unwrap_or_default().to_string(),
            });
        }
    }

    let mut master = ChaCha20Rng::seed_from_u64(seed);
    let split_seeds: Vec<u64> = (0..n_splits).map(|_| master.gen()).collect();

    let mut splits = Vec::with_capacity(n_splits);
    for split_seed in split_seeds {
        let mut rng = ChaCha20Rng::seed_from_u64(split_seed);
        let mut order = triplets.clone();
        order.shuffle(&mut rng);
        let target = ((train_fraction * order.len() as f64).ceil() as usize).min(order.len());

        let mut train: Vec<Triplet> = order[..target].to_vec();
        let mut covered_u = vec![false; dataset.users.len()];
        let mut covered_i = vec![false; dataset.items.len()];
        let mut covered_e = vec![false; dataset.explanations.len()];
        for t in &train {
            covered_u[t.user as usize] = true;
            covered_i[t.item as usize] = true;
            covered_e[t.explanation as usize] = true;
        }
        let mut test = Vec::with_capacity(order.len() - target);
        for &t in &order[target..] {
            let needed = !covered_u[t.user as usize]
                || !covered_i[t.item as usize]
                || !covered_e[t.explanation as usize];
            if needed {
                covered_u[t.user as usize] = true;
                covered_i[t.item as usize] = true;
                covered_e[t.explanation as usize] = true;
                train.push(t);
            } else {
                test.push(t);
            }
        }
        train.sort_unstable();
        test.sort_unstable();
        splits.push(Split {
            train,
            test,
            seed: split_seed,
        });
    }
    Ok(splits)
}

/// Write `split<k>.train` / `split<k>.test` files (k starting at 1) of
/// `userID::itemID::expID` lines.
pub fn write_split_files(dataset: &Dataset, splits: &[Split], out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    for (k, split) in splits.iter().enumerate() {
        for (part, name) in [(&split.train, "train"), (&split.test, "test")] {
            let mut out = String::new();
            for t in part.iter() {
                let user = dataset.users.id_of(t.user).ok_or(Error::UnknownEntity {
                    kind: "user",
                    id: t.user.to_string(),
                })?;
                let item = dataset.items.id_of(t.item).ok_or(Error::UnknownEntity {
                    kind: "item",
                    id: t.item.to_string(),
                })?;
                let exp =
                    dataset
                        .explanations
                        .id_of(t.explanation)
                        .ok_or(Error::UnknownEntity {
                            kind: "explanation",
                            id: t.explanation.to_string(),
                        })?;
                writeln!(out, "{user}::{item}::{exp}").expect("writing to a String cannot fail");
            }
            let path = out_dir.join(format!("split{}.{name}", k + 1));
            fs::write(&path, out).map_err(|e| Error::io(&path, e))?;
        }
    }
    Ok(())
}

/// Read one `userID::itemID::expID`-per-line split file back into triplets,
/// resolving the ids through the dataset's vocabularies.
pub fn read_split_file(dataset: &Dataset, path: &Path) -> Result<Vec<Triplet>> {
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in raw.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split("::").collect();
        if fields.len() != 3 {
            return Err(Error::malformed(
                path,
                idx + 1,
                format!(
                    "expected userID::itemID::expID, got {} fields",
                    fields.len()
                ),
            ));
        }
        let user = dataset
            .users
            .index_of(fields[0])
            .ok_or(Error::UnknownEntity {
                kind: "user",
                id: fields[0].to_string(),
            })?;
        let item = dataset
            .items
            .index_of(fields[1])
            .ok_or(Error::UnknownEntity {
                kind: "item",
                id: fields[1].to_string(),
            })?;
        let explanation = dataset
            .explanations
            .index_of(fields[2])
            .ok_or(Error::UnknownEntity {
                kind: "explanation",
                id: fields[2].to_string(),
            })?;
        out.push(Triplet {
            user,
            item,
            explanation,
        });
    }
    Ok(out)
}
