//! `exprank build`: raw corpus → filtered sentences → near-duplicate
//! groups → dataset files.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;

use exprank::dataset::{assemble, compute_stats, emit_dataset};
use exprank::filter::{filter_candidates, PosLexicon};
use exprank::grouping::{group_sentences, GroupingConfig};
use exprank::ingest::{collect_sentences, open_corpus, parse_corpus, ErrorPolicy};

use crate::config::{resolve, resolve_required, resolve_switch, write_provenance, ConfigFile};
use crate::UsageError;

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// JSON-lines review corpus (`.jsonl`, or `.gz` for compressed).
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Output directory for IDs.txt and id2exp.txt.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Word→part-of-speech lexicon TSV (default: the bundled lexicon).
    #[arg(long, value_name = "FILE", requires = "pronouns")]
    pub lexicon: Option<PathBuf>,
    /// Personal-pronoun word list (default: the bundled list).
    #[arg(long, value_name = "FILE", requires = "lexicon")]
    pub pronouns: Option<PathBuf>,
    /// Shingle size n for sentence similarity.
    #[arg(long, value_name = "N")]
    pub shingle: Option<usize>,
    /// Near-duplicate Jaccard threshold t.
    #[arg(long, value_name = "T")]
    pub threshold: Option<f64>,
    /// Groups must hold strictly more than this many near-duplicates.
    #[arg(long, value_name = "G")]
    pub min_group: Option<usize>,
    /// MinHash permutations k.
    #[arg(long, value_name = "K")]
    pub permutations: Option<usize>,
    /// Seed for the signature hash family.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Skip malformed corpus lines (with a warning) instead of aborting.
    #[arg(long)]
    pub skip_malformed: bool,
}

struct Settings {
    input: PathBuf,
    out: PathBuf,
    lexicon: Option<PathBuf>,
    pronouns: Option<PathBuf>,
    grouping: GroupingConfig,
    skip_malformed: bool,
}

impl Settings {
    fn resolve(args: BuildArgs, cfg: &ConfigFile) -> Result<Self> {
        let defaults = GroupingConfig::default();
        let grouping = GroupingConfig {
            shingle_size: resolve(args.shingle, cfg, "shingle", defaults.shingle_size)?,
            threshold: resolve(args.threshold, cfg, "threshold", defaults.threshold)?,
            min_group_size: resolve(args.min_group, cfg, "min-group", defaults.min_group_size)?,
            num_perm: resolve(args.permutations, cfg, "permutations", defaults.num_perm)?,
            seed: resolve(args.seed, cfg, "seed", defaults.seed)?,
        };
        if !(grouping.threshold > 0.0 && grouping.threshold < 1.0) {
            return Err(UsageError("--threshold must lie strictly between 0 and 1".into()).into());
        }
        if grouping.shingle_size == 0 {
            return Err(UsageError("--shingle must be at least 1".into()).into());
        }
        let lexicon = args.lexicon.or(cfg.get("lexicon")?);
        let pronouns = args.pronouns.or(cfg.get("pronouns")?);
        if lexicon.is_some() != pronouns.is_some() {
            return Err(
                UsageError("--lexicon and --pronouns must be given together".into()).into(),
            );
        }
        Ok(Settings {
            input: resolve_required(args.input, cfg, "input")?,
            out: resolve_required(args.out, cfg, "out")?,
            lexicon,
            pronouns,
            grouping,
            skip_malformed: resolve_switch(args.skip_malformed, cfg, "skip-malformed")?,
        })
    }

    fn provenance(&self) -> Vec<(&'static str, String)> {
        let mut entries = vec![
            ("input", self.input.display().to_string()),
            ("out", self.out.display().to_string()),
            ("shingle", self.grouping.shingle_size.to_string()),
            ("threshold", self.grouping.threshold.to_string()),
            ("min-group", self.grouping.min_group_size.to_string()),
            ("permutations", self.grouping.num_perm.to_string()),
            ("seed", self.grouping.seed.to_string()),
            ("skip-malformed", self.skip_malformed.to_string()),
        ];
        if let (Some(lexicon), Some(pronouns)) = (&self.lexicon, &self.pronouns) {
            entries.push(("lexicon", lexicon.display().to_string()));
            entries.push(("pronouns", pronouns.display().to_string()));
        }
        entries
    }
}

pub fn run(args: BuildArgs, cfg: &ConfigFile) -> Result<()> {
    let settings = Settings::resolve(args, cfg)?;
    let lexicon = match (&settings.lexicon, &settings.pronouns) {
        (Some(lexicon), Some(pronouns)) => {
            PosLexicon::from_files(lexicon, pronouns).context("loading lexicon")?
        }
        _ => PosLexicon::bundled(),
    };

    let policy = if settings.skip_malformed {
        ErrorPolicy::SkipAndLog
    } else {
        ErrorPolicy::Abort
    };
    let reader = open_corpus(&settings.input)?;
    let parsed = parse_corpus(reader, &settings.input, policy).context("corpus parsing stage")?;
    if let Some(first) = parsed.skipped.first() {
        eprintln!(
            "warning: skipped {} malformed line(s); first at line {}: {}",
            parsed.skipped.len(),
            first.line,
            first.message
        );
    }
    if parsed.records.is_empty() {
        eprintln!(
            "warning: {} holds no usable records; writing an empty dataset",
            settings.input.display()
        );
    }

    let sentences = collect_sentences(&parsed.records);
    let candidates = filter_candidates(sentences.clone(), &lexicon);
    let (groups, assignment) =
        group_sentences(&candidates, &settings.grouping).context("grouping stage")?;
    let dataset = assemble(&parsed.records, &candidates, &assignment);
    dataset.validate().context("dataset assembly stage")?;

    fs::create_dir_all(&settings.out)
        .with_context(|| format!("creating {}", settings.out.display()))?;
    emit_dataset(&dataset, &settings.out).context("dataset emit stage")?;
    write_provenance(
        &settings.out.join("provenance.txt"),
        "build",
        &settings.provenance(),
    )?;

    let stats = compute_stats(&dataset);
    println!(
        "{} records, {} sentences, {} filter candidates, {} groups",
        parsed.records.len(),
        sentences.len(),
        candidates.len(),
        groups.len()
    );
    println!(
        "dataset: {} users, {} items, {} explanations, {} triplets → {}",
        stats.n_users,
        stats.n_items,
        stats.n_explanations,
        stats.n_triplets,
        settings.out.display()
    );

    if !groups.is_empty() {
        let text_of: HashMap<u64, &str> = candidates
            .iter()
            .map(|s| (s.sentence_id, s.text.as_str()))
            .collect();
        let mut by_occurrence: Vec<_> = groups.iter().collect();
        by_occurrence.sort_by(|a, b| {
            b.occurrence
                .cmp(&a.occurrence)
                .then(a.explanation_id.cmp(&b.explanation_id))
        });
        println!("top explanations by occurrence:");
        for group in by_occurrence.iter().take(5) {
            println!(
                "  {:>6}  {}",
                group.occurrence,
                text_of.get(&group.explanation_id).copied().unwrap_or("?")
            );
        }
    }
    Ok(())
}
