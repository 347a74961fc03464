//! Word-token model shared by every stage of the toolkit.
//!
//! Text is split on runs of whitespace only; punctuation stays attached to
//! its word ("apples." is one token). Word positions are 1-based wherever
//! the toolkit talks about positions.

use std::fmt;

use thiserror::Error;

/// An ordered sequence of word tokens.
///
/// Invariants: no token is empty and no token contains whitespace, so
/// `tokenize(seq.detokenize(), false)` always reproduces `seq`. Values are
/// immutable after construction and safe to share across threads.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TokenSeq {
    tokens: Vec<String>,
}

/// Rejection reasons for [`TokenSeq::new`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenError {
    #[error("token {index} is empty")]
    Empty { index: usize },
    #[error("token {index} ({token:?}) contains whitespace")]
    Whitespace { index: usize, token: String },
}

impl TokenSeq {
    /// Build a sequence from pre-split words, validating the token invariants.
    pub fn new(tokens: Vec<String>) -> Result<Self, TokenError> {
        for (index, token) in tokens.iter().enumerate() {
            if token.is_empty() {
                return Err(TokenError::Empty { index });
            }
            if token.chars().any(char::is_whitespace) {
                return Err(TokenError::Whitespace {
                    index,
                    token: token.clone(),
                });
            }
        }
        Ok(TokenSeq { tokens })
    }

    /// Internal constructor for words that already satisfy the invariants
    /// (tokenizer output, aligner output, parsed payload words).
    pub(crate) fn from_validated(tokens: Vec<String>) -> Self {
        debug_assert!(tokens
            .iter()
            .all(|t| !t.is_empty() && !t.chars().any(char::is_whitespace)));
        TokenSeq { tokens }
    }

    pub fn empty() -> Self {
        TokenSeq::default()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.tokens
    }

    pub fn into_words(self) -> Vec<String> {
        self.tokens
    }

    /// Join the tokens with single spaces; the empty sequence yields `""`.
    pub fn detokenize(&self) -> String {
        self.tokens.join(" ")
    }
}

impl fmt::Display for TokenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.detokenize())
    }
}

/// Split `text` on runs of whitespace, optionally lowercasing each token.
///
/// Empty input (or all-whitespace input) yields the empty sequence.
pub fn tokenize(text: &str, normalize_case: bool) -> TokenSeq {
    let tokens = text
        .split_whitespace()
        .map(|word| {
            if normalize_case {
                word.to_lowercase()
            } else {
                word.to_string()
            }
        })
        .collect();
    TokenSeq { tokens }
}

/// Free-function form of [`TokenSeq::detokenize`].
pub fn detokenize(seq: &TokenSeq) -> String {
    seq.detokenize()
}
