//! Shared tokenization.
//!
//! The pronoun gate, the noun/adjective counts and the shingle sets must all
//! agree on token boundaries, so they share this one routine.

/// Split on whitespace, strip leading/trailing punctuation per token, lowercase.
///
/// Tokens that are pure punctuation vanish. Interior punctuation is kept, so
/// "don't" stays one token while "good," becomes "good".
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let token = raw.trim_matches(|c: char| !c.is_alphanumeric());
            if token.is_empty() {
                None
            } else {
                Some(token.to_lowercase())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_edge_punctuation_and_lowercases() {
        assert_eq!(tokenize("Great movie."), vec!["great", "movie"]);
        assert_eq!(tokenize("  \"Loved it!\"  "), vec!["loved", "it"]);
    }

    #[test]
    fn keeps_interior_punctuation() {
        assert_eq!(
            tokenize("don't waste your money"),
            vec!["don't", "waste", "your", "money"]
        );
    }

    #[test]
    fn drops_pure_punctuation_tokens() {
        assert_eq!(tokenize("good -- bad"), vec!["good", "bad"]);
        assert!(tokenize("...").is_empty());
        assert!(tokenize("").is_empty());
    }
}
