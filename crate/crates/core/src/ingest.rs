//! Corpus ingestion: JSON-lines review records and sentence splitting.
//!
//! Input is one JSON object per line with fields `user`, `item`, `rating`,
//! `timestamp`, `text` and optional `title`. Corpora in other native formats
//! are expected to be normalized to this schema by small adapter scripts.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};

/// One review: who wrote it, about what, and the text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub user_id: String,
    pub item_id: String,
    /// Overall rating, 1 to 5.
    pub rating: u8,
    /// Seconds since epoch.
    pub timestamp: i64,
    pub review_text: String,
    /// Short heading or tip attached to the review, when the source has one.
    pub heading: Option<String>,
}

/// One sentence extracted from a record, with a corpus-global id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    /// Unique per corpus run, assigned in ingestion order.
    pub sentence_id: u64,
    /// Index of the owning record in the parsed record sequence.
    pub record_ref: usize,
    /// Whitespace-normalized sentence text.
    pub text: String,
}

/// What to do with a malformed input line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorPolicy {
    /// Collect the error and keep going.
    SkipAndLog,
    /// Fail on the first malformed line.
    Abort,
}

/// A rejected input line and why it was rejected.
#[derive(Debug, Clone)]
pub struct LineIssue {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

/// Records parsed from a corpus plus any lines that were skipped.
#[derive(Debug, Default)]
pub struct CorpusParse {
    pub records: Vec<RawRecord>,
    pub skipped: Vec<LineIssue>,
}

#[derive(Deserialize)]
struct JsonRecord {
    user: String,
    item: String,
    rating: i64,
    timestamp: i64,
    #[serde(default)]
    text: String,
    #[serde(default)]
    title: Option<String>,
}

impl JsonRecord {
    fn validate(self) -> std::result::Result<RawRecord, String> {
        if self.user.is_empty() {
            return Err("empty user id".into());
        }
        if self.item.is_empty() {
            return Err("empty item id".into());
        }
        if !(1..=5).contains(&self.rating) {
            return Err(format!("rating {} out of range 1-5", self.rating));
        }
        let heading = self.title.filter(|t| !t.is_empty());
        if self.text.is_empty() && heading.is_none() {
            return Err("record has neither text nor title".into());
        }
        Ok(RawRecord {
            user_id: self.user,
            item_id: self.item,
            rating: self.rating as u8,
            timestamp: self.timestamp,
            review_text: self.text,
            heading,
        })
    }
}

/// Open a corpus file, transparently decompressing a `.gz` suffix.
pub fn open_corpus(path: &Path) -> Result<Box<dyn BufRead>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    if path.extension().is_some_and(|ext| ext == "gz") {
        Ok(Box::new(BufReader::new(flate2::read::GzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Parse a JSON-lines corpus into records, in file order.
///
/// Blank lines are ignored. Malformed lines are reported with their 1-based
/// line number; `policy` decides whether they abort the parse or are skipped.
pub fn parse_corpus<R: Read>(
    reader: R,
    source: impl Into<PathBuf>,
    policy: ErrorPolicy,
) -> Result<CorpusParse> {
    let source = source.into();
    let mut out = CorpusParse::default();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(&source, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<JsonRecord>(&line)
            .map_err(|e| e.to_string())
            .and_then(JsonRecord::validate);
        match parsed {
            Ok(record) => out.records.push(record),
            Err(message) => match policy {
                ErrorPolicy::Abort => return Err(Error::malformed(source, line_no, message)),
                ErrorPolicy::SkipAndLog => out.skipped.push(LineIssue {
                    line: line_no,
                    message,
                }),
            },
        }
    }
    Ok(out)
}

/// Review text plus heading, joined by a single space.
pub fn concat_text(record: &RawRecord) -> String {
    match (&record.heading, record.review_text.is_empty()) {
        (Some(heading), true) => heading.clone(),
        (Some(heading), false) => format!("{} {}", record.review_text, heading),
        (None, _) => record.review_text.clone(),
    }
}

/// Terminal punctuation whose preceding word suppresses a sentence break.
const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "rev", "sr", "jr", "st", "mt", "vs", "etc", "e.g", "i.e",
    "inc", "ltd", "co", "corp", "dept", "fig", "vol", "approx",
];

fn is_abbreviation(word: &str) -> bool {
    let last_segment = word.rsplit('.').next().unwrap_or(word);
    // Single letters cover initials and dotted acronyms ("D.C.").
    last_segment.chars().count() <= 1 || ABBREVIATIONS.contains(&word)
}

/// Split text into sentences at `.`, `!` or `?` followed by whitespace or
/// end of input, keeping the terminal punctuation with its sentence.
///
/// A period does not end a sentence when the word before it is a known
/// abbreviation or a single letter. Each sentence is whitespace-normalized.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        if matches!(chars[i], '.' | '!' | '?') {
            let mut end = i + 1;
            while end < chars.len() && matches!(chars[end], '.' | '!' | '?') {
                end += 1;
            }
            let at_boundary = end >= chars.len() || chars[end].is_whitespace();
            let run_is_single_period = end - i == 1 && chars[i] == '.';
            let guarded = run_is_single_period && {
                let word: String = chars[start..i]
                    .iter()
                    .rev()
                    .take_while(|c| !c.is_whitespace())
                    .collect::<Vec<_>>()
                    .into_iter()
                    .rev()
                    .collect();
                is_abbreviation(&word.to_lowercase())
            };
            if at_boundary && !guarded {
                push_normalized(&mut sentences, &chars[start..end]);
                start = end;
            }
            i = end;
        } else {
            i += 1;
        }
    }
    if start < chars.len() {
        push_normalized(&mut sentences, &chars[start..]);
    }
    sentences
}

fn push_normalized(sentences: &mut Vec<String>, chars: &[char]) {
    let text: String = chars.iter().collect();
    let normalized = text.split_whitespace().collect::<Vec<_>>().join(" ");
    if !normalized.is_empty() {
        sentences.push(normalized);
    }
}

/// Split every record into sentences and number them globally in input order.
pub fn collect_sentences(records: &[RawRecord]) -> Vec<Sentence> {
    let per_record: Vec<Vec<String>> = records
        .par_iter()
        .map(|r| split_sentences(&concat_text(r)))
        .collect();
    let mut sentences = Vec::new();
    let mut next_id = 0u64;
    for (record_ref, texts) in per_record.into_iter().enumerate() {
        for text in texts {
            sentences.push(Sentence {
                sentence_id: next_id,
                record_ref,
                text,
            });
            next_id += 1;
        }
    }
    sentences
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(text: &str, heading: Option<&str>) -> RawRecord {
        RawRecord {
            user_id: "u".into(),
            item_id: "i".into(),
            rating: 5,
            timestamp: 0,
            review_text: text.into(),
            heading: heading.map(String::from),
        }
    }

    #[test]
    fn parses_the_declared_schema() {
        let input = r#"{"user":"A20YXFTS3GUGON","item":"B00ICWO0ZY","rating":5,"timestamp":1405958400,"text":"This is a wonderful movie. Great Movie"}"#;
        let parsed = parse_corpus(input.as_bytes(), "test.jsonl", ErrorPolicy::Abort).unwrap();
        assert_eq!(parsed.records.len(), 1);
        let r = &parsed.records[0];
        assert_eq!(r.user_id, "A20YXFTS3GUGON");
        assert_eq!(r.item_id, "B00ICWO0ZY");
        assert_eq!(r.rating, 5);
        assert_eq!(r.timestamp, 1405958400);
    }

    #[test]
    fn empty_input_yields_no_records() {
        let parsed = parse_corpus("".as_bytes(), "empty.jsonl", ErrorPolicy::Abort).unwrap();
        assert!(parsed.records.is_empty());
        assert!(parsed.skipped.is_empty());
    }

    #[test]
    fn out_of_range_rating_is_rejected_with_line_number() {
        let input = concat!(
            r#"{"user":"a","item":"b","rating":5,"timestamp":0,"text":"ok"}"#,
            "\n",
            r#"{"user":"a","item":"b","rating":7,"timestamp":0,"text":"bad"}"#,
        );
        let err = parse_corpus(input.as_bytes(), "in.jsonl", ErrorPolicy::Abort).unwrap_err();
        assert!(err.to_string().contains("in.jsonl:2"), "{err}");

        let parsed = parse_corpus(input.as_bytes(), "in.jsonl", ErrorPolicy::SkipAndLog).unwrap();
        assert_eq!(parsed.records.len(), 1);
        assert_eq!(parsed.skipped.len(), 1);
        assert_eq!(parsed.skipped[0].line, 2);
    }

    #[test]
    fn malformed_json_is_reported() {
        let input = "not json at all";
        let parsed = parse_corpus(input.as_bytes(), "in.jsonl", ErrorPolicy::SkipAndLog).unwrap();
        assert!(parsed.records.is_empty());
        assert_eq!(parsed.skipped.len(), 1);
    }

    #[test]
    fn concat_joins_text_and_heading_with_one_space() {
        assert_eq!(
            concat_text(&record("Great film.", Some("Loved it"))),
            "Great film. Loved it"
        );
        assert_eq!(concat_text(&record("Great film.", None)), "Great film.");
        assert_eq!(concat_text(&record("", Some("Loved it"))), "Loved it");
    }

    #[test]
    fn splits_on_terminal_punctuation() {
        assert_eq!(
            split_sentences("Great movie. The cast is first rate."),
            vec!["Great movie.", "The cast is first rate."]
        );
        assert_eq!(split_sentences("Excellent movie"), vec!["Excellent movie"]);
        assert!(split_sentences("").is_empty());
    }

    #[test]
    fn exclamations_and_questions_split_too() {
        assert_eq!(
            split_sentences("Amazing! Would you believe it? Yes."),
            vec!["Amazing!", "Would you believe it?", "Yes."]
        );
        // Runs of punctuation stay with one sentence.
        assert_eq!(
            split_sentences("What a film?! Superb."),
            vec!["What a film?!", "Superb."]
        );
    }

    #[test]
    fn abbreviations_do_not_split() {
        assert_eq!(
            split_sentences("Dr. Smith was great. Highly recommended."),
            vec!["Dr. Smith was great.", "Highly recommended."]
        );
        assert_eq!(
            split_sentences("Filmed in Washington D.C. last year."),
            vec!["Filmed in Washington D.C. last year."]
        );
        assert_eq!(
            split_sentences("Good props, sets, etc. but weak plot."),
            vec!["Good props, sets, etc. but weak plot."]
        );
    }

    #[test]
    fn sentences_are_whitespace_normalized() {
        assert_eq!(
            split_sentences("Great   movie.\n\tThe cast   is first rate."),
            vec!["Great movie.", "The cast is first rate."]
        );
    }

    #[test]
    fn coverage_no_nonwhitespace_character_is_lost() {
        let texts = [
            "Great movie. The cast is first rate.",
            "Dr. Smith. No. Really!",
            "One... two... three. Done?!",
            "trailing space. ",
        ];
        for text in texts {
            let joined: String = split_sentences(text).concat();
            let original: String = text.chars().filter(|c| !c.is_whitespace()).collect();
            let recovered: String = joined.chars().filter(|c| !c.is_whitespace()).collect();
            assert_eq!(original, recovered, "lost content in {text:?}");
        }
    }

    #[test]
    fn sentence_ids_are_global_and_in_input_order() {
        let records = vec![
            record("First one. Second one.", None),
            record("Third one.", Some("Fourth one")),
        ];
        let sentences = collect_sentences(&records);
        let ids: Vec<u64> = sentences.iter().map(|s| s.sentence_id).collect();
        assert_eq!(ids, vec![0, 1, 2, 3]);
        assert_eq!(sentences[2].record_ref, 1);
        assert_eq!(sentences[3].text, "Fourth one");
    }
}
