//! Explanation-quality sentence gate.
//!
//! A sentence survives when it has no personal pronoun and contains at least
//! one noun and one adjective. Tagging is lexicon-based: the gate only needs
//! the existence of a noun and an adjective, which a word list answers
//! deterministically with no model dependency. The [`Tagger`] trait leaves
//! room to plug in an external tagger instead.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::Sentence;
use crate::text::tokenize;

const BUNDLED_LEXICON: &str = include_str!("../assets/lexicon.tsv");
const BUNDLED_PRONOUNS: &str = include_str!("../assets/pronouns.txt");

/// Word lists driving the gate: nouns, adjectives, personal pronouns.
///
/// A word may be both noun and adjective; pronouns are disjoint from the
/// other two sets.
#[derive(Debug, Clone)]
pub struct PosLexicon {
    nouns: HashSet<String>,
    adjectives: HashSet<String>,
    pronouns: HashSet<String>,
}

/// Anything that can count nouns and adjectives in a sentence.
pub trait Tagger {
    fn noun_adjective_counts(&self, text: &str) -> (usize, usize);
}

impl Tagger for PosLexicon {
    fn noun_adjective_counts(&self, text: &str) -> (usize, usize) {
        let mut nouns = 0;
        let mut adjectives = 0;
        for token in tokenize(text) {
            if self.nouns.contains(&token) {
                nouns += 1;
            }
            if self.adjectives.contains(&token) {
                adjectives += 1;
            }
        }
        (nouns, adjectives)
    }
}

impl PosLexicon {
    /// The word lists shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_LEXICON, BUNDLED_PRONOUNS).expect("bundled lexicon is well-formed")
    }

    /// Load from a `word<TAB>tags` lexicon file (tags from {N, ADJ}, comma
    /// separated) and a one-pronoun-per-line file.
    pub fn from_files(lexicon: &Path, pronouns: &Path) -> Result<Self> {
        let lex = std::fs::read_to_string(lexicon).map_err(|e| Error::io(lexicon, e))?;
        let pro = std::fs::read_to_string(pronouns).map_err(|e| Error::io(pronouns, e))?;
        Self::parse(&lex, &pro)
    }

    /// Parse lexicon and pronoun lists from their file contents.
    pub fn parse(lexicon: &str, pronouns: &str) -> Result<Self> {
        let mut nouns = HashSet::new();
        let mut adjectives = HashSet::new();
        for (idx, line) in lexicon.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, tags) = line.split_once('\t').ok_or_else(|| {
                Error::InvalidConfig(format!("lexicon line {}: missing tab", idx + 1))
            })?;
            let word = word.trim().to_lowercase();
            for tag in tags.split(',') {
                match tag.trim() {
                    "N" => {
                        nouns.insert(word.clone());
                    }
                    "ADJ" => {
                        adjectives.insert(word.clone());
                    }
                    other => {
                        return Err(Error::InvalidConfig(format!(
                            "lexicon line {}: unknown tag {other:?}",
                            idx + 1
                        )))
                    }
                }
            }
        }
        let pronouns: HashSet<String> = pronouns
            .lines()
            .map(|l| l.trim().to_lowercase())
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        if let Some(word) = pronouns
            .iter()
            .find(|p| nouns.contains(*p) || adjectives.contains(*p))
        {
            return Err(Error::InvalidConfig(format!(
                "pronoun {word:?} is also tagged noun/adjective"
            )));
        }
        Ok(PosLexicon {
            nouns,
            adjectives,
            pronouns,
        })
    }

    pub fn is_noun(&self, word: &str) -> bool {
        self.nouns.contains(word)
    }

    pub fn is_adjective(&self, word: &str) -> bool {
        self.adjectives.contains(word)
    }

    pub fn is_pronoun(&self, word: &str) -> bool {
        self.pronouns.contains(word)
    }
}

/// True iff any token of the sentence, lowercased, is a personal pronoun.
pub fn contains_personal_pronoun(sentence: &Sentence, lexicon: &PosLexicon) -> bool {
    tokenize(&sentence.text)
        .iter()
        .any(|t| lexicon.is_pronoun(t))
}

/// Noun and adjective counts for the sentence. A word tagged as both counts
/// toward both tallies.
pub fn pos_profile(sentence: &Sentence, lexicon: &PosLexicon) -> (usize, usize) {
    lexicon.noun_adjective_counts(&sentence.text)
}

/// The keep/drop gate: no personal pronoun, at least one noun, at least one
/// adjective.
pub fn is_candidate(sentence: &Sentence, lexicon: &PosLexicon) -> bool {
    if contains_personal_pronoun(sentence, lexicon) {
        return false;
    }
    let (nouns, adjectives) = pos_profile(sentence, lexicon);
    nouns >= 1 && adjectives >= 1
}

/// Keep only candidate sentences, preserving order and ids.
pub fn filter_candidates(sentences: Vec<Sentence>, lexicon: &PosLexicon) -> Vec<Sentence> {
    sentences
        .into_iter()
        .filter(|s| is_candidate(s, lexicon))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentence(text: &str) -> Sentence {
        Sentence {
            sentence_id: 0,
            record_ref: 0,
            text: text.into(),
        }
    }

    #[test]
    fn bundled_lexicon_loads_and_has_required_pronouns() {
        let lex = PosLexicon::bundled();
        for p in [
            "i", "me", "my", "mine", "we", "us", "our", "ours", "you", "your", "yours", "he",
            "him", "his", "she", "her", "hers",
        ] {
            assert!(lex.is_pronoun(p), "missing pronoun {p}");
        }
    }

    #[test]
    fn pronoun_detection_is_token_bounded() {
        let lex = PosLexicon::bundled();
        assert!(contains_personal_pronoun(
            &sentence("I loved this film"),
            &lex
        ));
        assert!(!contains_personal_pronoun(
            &sentence("Great location"),
            &lex
        ));
        // "my" must not match inside "mythology".
        assert!(!contains_personal_pronoun(
            &sentence("Mythology is not a pronoun here"),
            &lex
        ));
    }

    #[test]
    fn profile_counts_nouns_and_adjectives() {
        let lex = PosLexicon::bundled();
        let (nouns, adjectives) = pos_profile(&sentence("The room was clean"), &lex);
        assert!(nouns >= 1);
        assert!(adjectives >= 1);
        assert_eq!(pos_profile(&sentence(""), &lex), (0, 0));
        assert_eq!(pos_profile(&sentence("quickly"), &lex), (0, 0));
    }

    #[test]
    fn gate_requires_noun_and_adjective_and_no_pronoun() {
        let lex = PosLexicon::bundled();
        assert!(is_candidate(&sentence("The acting is superb"), &lex));
        assert!(!is_candidate(&sentence("I loved it"), &lex));
        assert!(!is_candidate(&sentence("Watch repeatedly"), &lex));
    }

    #[test]
    fn verdicts_are_case_insensitive() {
        let lex = PosLexicon::bundled();
        for text in ["The acting is superb", "I loved it", "Watch repeatedly"] {
            let upper = sentence(&text.to_uppercase());
            let lower = sentence(&text.to_lowercase());
            assert_eq!(is_candidate(&upper, &lex), is_candidate(&lower, &lex));
            assert_eq!(
                is_candidate(&upper, &lex),
                is_candidate(&sentence(text), &lex)
            );
        }
    }

    #[test]
    fn gate_matches_its_parts_on_a_fixture() {
        let lex = PosLexicon::bundled();
        let texts = [
            "The acting is superb",
            "I loved it",
            "Watch repeatedly",
            "Great location",
            "The room was clean",
            "Don't waste your money",
            "Excellent movie",
            "quickly",
        ];
        for text in texts {
            let s = sentence(text);
            let expected = !contains_personal_pronoun(&s, &lex) && {
                let (n, a) = pos_profile(&s, &lex);
                n >= 1 && a >= 1
            };
            assert_eq!(is_candidate(&s, &lex), expected, "{text}");
        }
    }

    #[test]
    fn custom_lexicon_rejects_pronoun_overlap() {
        let err = PosLexicon::parse("his\tN\n", "his\n");
        assert!(err.is_err());
    }

    #[test]
    fn custom_lexicon_parses_multi_tags() {
        let lex = PosLexicon::parse("light\tN,ADJ\nroom\tN\n", "i\n").unwrap();
        assert!(lex.is_noun("light"));
        assert!(lex.is_adjective("light"));
        assert!(lex.is_noun("room"));
        assert!(!lex.is_adjective("room"));
    }
}
