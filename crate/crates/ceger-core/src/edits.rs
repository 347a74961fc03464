//! Edit operations produced by alignment and the command alphabet they
//! compile into.

use thiserror::Error;

/// One aligned step between a hypothesis and a reference.
///
/// The naming is hypothesis-centric: `Delete` removes a hypothesis word,
/// `Insert` adds a reference word the hypothesis is missing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EditOp {
    /// Words the two sides agree on, carried over unchanged.
    Match { words: Vec<String> },
    /// Hypothesis words replaced by different reference words.
    Substitute {
        hyp_words: Vec<String>,
        ref_words: Vec<String>,
    },
    /// Reference words absent from the hypothesis.
    Insert { ref_words: Vec<String> },
    /// Hypothesis words absent from the reference.
    Delete { hyp_words: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EditKind {
    Match,
    Substitute,
    Insert,
    Delete,
}

impl EditOp {
    pub(crate) fn match_word(word: String) -> Self {
        EditOp::Match { words: vec![word] }
    }

    pub(crate) fn substitute_word(hyp: String, reference: String) -> Self {
        EditOp::Substitute {
            hyp_words: vec![hyp],
            ref_words: vec![reference],
        }
    }

    pub(crate) fn insert_word(reference: String) -> Self {
        EditOp::Insert {
            ref_words: vec![reference],
        }
    }

    pub(crate) fn delete_word(hyp: String) -> Self {
        EditOp::Delete {
            hyp_words: vec![hyp],
        }
    }

    pub fn kind(&self) -> EditKind {
        match self {
            EditOp::Match { .. } => EditKind::Match,
            EditOp::Substitute { .. } => EditKind::Substitute,
            EditOp::Insert { .. } => EditKind::Insert,
            EditOp::Delete { .. } => EditKind::Delete,
        }
    }

    /// Hypothesis words this op consumes (empty for `Insert`).
    pub fn hyp_words(&self) -> &[String] {
        match self {
            EditOp::Match { words } => words,
            EditOp::Substitute { hyp_words, .. } => hyp_words,
            EditOp::Insert { .. } => &[],
            EditOp::Delete { hyp_words } => hyp_words,
        }
    }

    /// Reference words this op produces (empty for `Delete`).
    pub fn ref_words(&self) -> &[String] {
        match self {
            EditOp::Match { words } => words,
            EditOp::Substitute { ref_words, .. } => ref_words,
            EditOp::Insert { ref_words } => ref_words,
            EditOp::Delete { .. } => &[],
        }
    }
}

/// One instruction of the edit-command grammar.
///
/// Counts are word counts over the hypothesis and must be at least 1.
/// Payload word lists are non-empty and contain no empty words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Command {
    /// Carry the next `n` hypothesis words over unchanged.
    MoveForward(usize),
    /// Skip the next `n` hypothesis words without emitting anything.
    Delete(usize),
    /// Emit the payload words; the hypothesis pointer does not move.
    Insert(Vec<String>),
    /// Emit the payload words and skip the next `n` hypothesis words.
    Replace(usize, Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CommandKind {
    MoveForward,
    Delete,
    Insert,
    Replace,
}

impl CommandKind {
    pub const ALL: [CommandKind; 4] = [
        CommandKind::MoveForward,
        CommandKind::Delete,
        CommandKind::Insert,
        CommandKind::Replace,
    ];

    /// The keyword this kind spells in the textual grammar.
    pub fn keyword(self) -> &'static str {
        match self {
            CommandKind::MoveForward => "MOVE_FORWARD",
            CommandKind::Delete => "DELETE",
            CommandKind::Insert => "INSERT",
            CommandKind::Replace => "REPLACE",
        }
    }
}

/// Violations of the [`Command`] invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommandError {
    #[error("count must be at least 1")]
    ZeroCount,
    #[error("payload must contain at least one word")]
    EmptyPayload,
    #[error("payload word {word:?} is empty or contains whitespace")]
    BadPayloadWord { word: String },
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::MoveForward(_) => CommandKind::MoveForward,
            Command::Delete(_) => CommandKind::Delete,
            Command::Insert(_) => CommandKind::Insert,
            Command::Replace(..) => CommandKind::Replace,
        }
    }

    /// The word count, for the kinds that carry one.
    pub fn count(&self) -> Option<usize> {
        match self {
            Command::MoveForward(n) | Command::Delete(n) | Command::Replace(n, _) => Some(*n),
            Command::Insert(_) => None,
        }
    }

    /// The payload words, for the kinds that carry them.
    pub fn payload(&self) -> Option<&[String]> {
        match self {
            Command::Insert(words) | Command::Replace(_, words) => Some(words),
            _ => None,
        }
    }

    /// Check the count and payload invariants.
    pub fn validate(&self) -> Result<(), CommandError> {
        if self.count() == Some(0) {
            return Err(CommandError::ZeroCount);
        }
        if let Some(words) = self.payload() {
            if words.is_empty() {
                return Err(CommandError::EmptyPayload);
            }
            for word in words {
                if word.is_empty() || word.chars().any(char::is_whitespace) {
                    return Err(CommandError::BadPayloadWord { word: word.clone() });
                }
            }
        }
        Ok(())
    }
}
