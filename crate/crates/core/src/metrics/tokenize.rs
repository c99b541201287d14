//! Token sequences shared by all generation metrics.

use serde::{Deserialize, Serialize};
use unicode_segmentation::UnicodeSegmentation;

/// How raw text is split into tokens.
///
/// `Character` splits on extended grapheme clusters and drops whitespace,
/// which keeps Chinese scoring reproducible without a word segmenter.
/// `Whitespace` is the conventional mode for Latin-script text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Character,
    Whitespace,
}

impl std::str::FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "character" | "char" => Ok(Granularity::Character),
            "whitespace" | "word" => Ok(Granularity::Whitespace),
            other => Err(format!("unknown granularity {other:?}")),
        }
    }
}

/// An ordered token sequence; tokens are never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    tokens: Vec<String>,
    granularity: Granularity,
}

impl TokenSequence {
    pub fn tokenize(text: &str, granularity: Granularity) -> Self {
        let tokens = match granularity {
            Granularity::Character => text
                .graphemes(true)
                .filter(|g| !g.chars().all(char::is_whitespace))
                .map(str::to_owned)
                .collect(),
            Granularity::Whitespace => text.split_whitespace().map(str::to_owned).collect(),
        };
        TokenSequence { tokens, granularity }
    }

    /// Builds a sequence from pre-split tokens, dropping empty ones.
    pub fn from_tokens<I, S>(tokens: I, granularity: Granularity) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TokenSequence {
            tokens: tokens
                .into_iter()
                .map(Into::into)
                .filter(|t| !t.is_empty())
                .collect(),
            granularity,
        }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn granularity(&self) -> Granularity {
        self.granularity
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_mode_drops_whitespace() {
        let seq = TokenSequence::tokenize("你好 世界", Granularity::Character);
        assert_eq!(seq.tokens(), ["你", "好", "世", "界"]);
    }

    #[test]
    fn character_mode_keeps_grapheme_clusters() {
        // family emoji is one extended grapheme cluster
        let seq = TokenSequence::tokenize("a👨‍👩‍👧b", Granularity::Character);
        assert_eq!(seq.len(), 3);
    }

    #[test]
    fn whitespace_mode_splits_words() {
        let seq = TokenSequence::tokenize("  the cat\tsat ", Granularity::Whitespace);
        assert_eq!(seq.tokens(), ["the", "cat", "sat"]);
    }

    #[test]
    fn no_empty_tokens() {
        let seq = TokenSequence::from_tokens(vec!["a", "", "b"], Granularity::Whitespace);
        assert_eq!(seq.tokens(), ["a", "b"]);
    }
}
