//! Compile alignments into command sequences and expand command sequences
//! back over a hypothesis.
//!
//! Expansion keeps a 1-based pointer `p` into the hypothesis, initialized
//! to 1, and an output word list:
//!
//! * `DELETE n`       : p <- p + n, nothing appended
//! * `INSERT w...`    : append w..., p unchanged
//! * `REPLACE n w...` : append w..., then p <- p + n
//! * `MOVE_FORWARD n` : append hyp[p ..= p+n-1], p <- p + n
//!
//! After the last command, lenient mode appends any remaining hypothesis
//! words while strict mode requires p == m + 1. Expansion is deterministic
//! and total: the same inputs always give the same output or the same error.

use thiserror::Error;

use crate::aligner::Alignment;
use crate::edits::{Command, CommandKind, EditOp};
use crate::tokens::TokenSeq;

/// What to do with hypothesis words left unconsumed after the last command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpandMode {
    /// Unconsumed input is an error. Used for oracle round-trips.
    Strict,
    /// Unconsumed input is implicitly carried over. The safer default for
    /// generated (possibly truncated) command text.
    Lenient,
}

/// Expansion failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ExpansionError {
    /// A command needs hypothesis words beyond position `hyp_len`
    /// (`pointer + count - 1 > hyp_len`).
    #[error(
        "command {command_index} needs {count} hypothesis words at position {pointer} \
         but the hypothesis has {hyp_len}"
    )]
    PointerOverflow {
        command_index: usize,
        pointer: usize,
        count: usize,
        hyp_len: usize,
    },
    /// Strict mode only: the commands ended with the pointer at `pointer`
    /// instead of `hyp_len + 1`. `command_index` is the command list length.
    #[error(
        "commands ended at pointer {pointer} with {hyp_len}-word hypothesis not fully consumed"
    )]
    UnconsumedInput {
        command_index: usize,
        pointer: usize,
        hyp_len: usize,
    },
}

/// Compile a unit-op alignment into the canonical command sequence.
///
/// Runs of same-kind ops coalesce into single commands (k Matches become
/// `MoveForward(k)`, and so on), and an adjacent Delete/Insert pair in
/// either order merges into a Replace covering the shorter run plus a
/// residual Delete or Insert. The result is canonical: no zero counts and
/// no two adjacent commands of the same kind, so a given alignment has
/// exactly one compiled form.
pub fn compile(alignment: &Alignment) -> Vec<Command> {
    let mut commands = Vec::new();
    for op in alignment.ops() {
        let command = match op {
            EditOp::Match { words } => Command::MoveForward(words.len()),
            EditOp::Substitute {
                hyp_words,
                ref_words,
            } => Command::Replace(hyp_words.len(), ref_words.clone()),
            EditOp::Insert { ref_words } => Command::Insert(ref_words.clone()),
            EditOp::Delete { hyp_words } => Command::Delete(hyp_words.len()),
        };
        push_canonical(&mut commands, command);
    }
    commands
}

fn push_canonical(out: &mut Vec<Command>, command: Command) {
    use Command::*;
    match (out.pop(), command) {
        (None, command) => out.push(command),
        (Some(MoveForward(a)), MoveForward(b)) => out.push(MoveForward(a + b)),
        (Some(Delete(a)), Delete(b)) => out.push(Delete(a + b)),
        (Some(Insert(mut a)), Insert(b)) => {
            a.extend(b);
            out.push(Insert(a));
        }
        (Some(Replace(n1, mut w1)), Replace(n2, w2)) => {
            w1.extend(w2);
            out.push(Replace(n1 + n2, w1));
        }
        (Some(Delete(deleted)), Insert(words)) | (Some(Insert(words)), Delete(deleted)) => {
            merge_delete_insert(out, deleted, words);
        }
        (Some(previous), command) => {
            out.push(previous);
            out.push(command);
        }
    }
}

/// A net "consume `deleted` hypothesis words, emit `words`" region becomes
/// a Replace over the shorter side plus a residual Delete or Insert.
fn merge_delete_insert(out: &mut Vec<Command>, deleted: usize, mut words: Vec<String>) {
    use std::cmp::Ordering;
    match deleted.cmp(&words.len()) {
        Ordering::Equal => push_canonical(out, Command::Replace(deleted, words)),
        Ordering::Greater => {
            let covered = words.len();
            push_canonical(out, Command::Replace(covered, words));
            push_canonical(out, Command::Delete(deleted - covered));
        }
        Ordering::Less => {
            let rest = words.split_off(deleted);
            push_canonical(out, Command::Replace(deleted, words));
            push_canonical(out, Command::Insert(rest));
        }
    }
}

/// Execute `commands` over `hyp`.
pub fn expand(
    hyp: &TokenSeq,
    commands: &[Command],
    mode: ExpandMode,
) -> Result<TokenSeq, ExpansionError> {
    let words = hyp.words();
    let hyp_len = words.len();
    let mut pointer: usize = 1;
    let mut output: Vec<String> = Vec::with_capacity(hyp_len);

    for (command_index, command) in commands.iter().enumerate() {
        match command {
            Command::Delete(n) => {
                check_window(command_index, pointer, *n, hyp_len)?;
                pointer += n;
            }
            Command::Insert(payload) => output.extend_from_slice(payload),
            Command::Replace(n, payload) => {
                check_window(command_index, pointer, *n, hyp_len)?;
                output.extend_from_slice(payload);
                pointer += n;
            }
            Command::MoveForward(n) => {
                check_window(command_index, pointer, *n, hyp_len)?;
                output.extend_from_slice(&words[pointer - 1..pointer - 1 + n]);
                pointer += n;
            }
        }
    }

    match mode {
        ExpandMode::Strict => {
            if pointer != hyp_len + 1 {
                return Err(ExpansionError::UnconsumedInput {
                    command_index: commands.len(),
                    pointer,
                    hyp_len,
                });
            }
        }
        ExpandMode::Lenient => output.extend_from_slice(&words[pointer - 1..]),
    }

    Ok(TokenSeq::from_validated(output))
}

fn check_window(
    command_index: usize,
    pointer: usize,
    count: usize,
    hyp_len: usize,
) -> Result<(), ExpansionError> {
    let overflow = || ExpansionError::PointerOverflow {
        command_index,
        pointer,
        count,
        hyp_len,
    };
    // count >= 1 for valid commands; the window is pointer ..= pointer+count-1
    let last = pointer
        .checked_add(count.saturating_sub(1))
        .ok_or_else(overflow)?;
    if last > hyp_len {
        return Err(overflow());
    }
    Ok(())
}

/// Per-kind command counts over a sequence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CommandStats {
    pub move_forward: usize,
    pub delete: usize,
    pub insert: usize,
    pub replace: usize,
}

impl CommandStats {
    pub fn count(&self, kind: CommandKind) -> usize {
        match kind {
            CommandKind::MoveForward => self.move_forward,
            CommandKind::Delete => self.delete,
            CommandKind::Insert => self.insert,
            CommandKind::Replace => self.replace,
        }
    }

    pub fn total(&self) -> usize {
        self.move_forward + self.delete + self.insert + self.replace
    }

    pub fn merge(&mut self, other: CommandStats) {
        self.move_forward += other.move_forward;
        self.delete += other.delete;
        self.insert += other.insert;
        self.replace += other.replace;
    }
}

/// Count commands per kind.
pub fn command_stats(commands: &[Command]) -> CommandStats {
    let mut stats = CommandStats::default();
    for command in commands {
        match command.kind() {
            CommandKind::MoveForward => stats.move_forward += 1,
            CommandKind::Delete => stats.delete += 1,
            CommandKind::Insert => stats.insert += 1,
            CommandKind::Replace => stats.replace += 1,
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aligner::align;
    use crate::tokens::tokenize;
    use proptest::prelude::*;

    fn seq(text: &str) -> TokenSeq {
        tokenize(text, false)
    }

    fn words(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn compile_worked_example() {
        let hyp = seq("I went to the store and bought apples.");
        let reference = seq("I went to the market and bought red apples.");
        let commands = compile(&align(&hyp, &reference));
        assert_eq!(
            commands,
            vec![
                Command::MoveForward(4),
                Command::Replace(1, words(&["market"])),
                Command::MoveForward(2),
                Command::Insert(words(&["red"])),
                Command::MoveForward(1),
            ]
        );
    }

    #[test]
    fn compile_identical_pair_is_one_command() {
        let text = seq("a b c d e f g h i j");
        assert_eq!(
            compile(&align(&text, &text)),
            vec![Command::MoveForward(10)]
        );
    }

    #[test]
    fn compile_empty_hypothesis() {
        let commands = compile(&align(&TokenSeq::empty(), &seq("a b")));
        assert_eq!(commands, vec![Command::Insert(words(&["a", "b"]))]);
    }

    #[test]
    fn compile_empty_reference() {
        let commands = compile(&align(&seq("a b"), &TokenSeq::empty()));
        assert_eq!(commands, vec![Command::Delete(2)]);
    }

    #[test]
    fn compile_merges_delete_insert_runs() {
        use crate::edits::EditOp;
        // These adjacencies never come out of the unit-cost aligner (a
        // Delete next to an Insert is always beatable by a Substitute),
        // but compile accepts any valid alignment and must canonicalize.
        let ops = vec![
            EditOp::delete_word("a".into()),
            EditOp::delete_word("b".into()),
            EditOp::insert_word("x".into()),
        ];
        let alignment = Alignment::from_unit_ops(ops).unwrap();
        assert_eq!(
            compile(&alignment),
            vec![Command::Replace(1, words(&["x"])), Command::Delete(1)]
        );

        let ops = vec![
            EditOp::insert_word("x".into()),
            EditOp::insert_word("y".into()),
            EditOp::delete_word("a".into()),
        ];
        let alignment = Alignment::from_unit_ops(ops).unwrap();
        assert_eq!(
            compile(&alignment),
            vec![
                Command::Replace(1, words(&["x"])),
                Command::Insert(words(&["y"]))
            ]
        );
    }

    #[test]
    fn expand_worked_example() {
        let hyp = seq("I went to the store and bought apples.");
        let commands = vec![
            Command::MoveForward(4),
            Command::Replace(1, words(&["market"])),
            Command::MoveForward(2),
            Command::Insert(words(&["red"])),
            Command::MoveForward(1),
        ];
        let out = expand(&hyp, &commands, ExpandMode::Strict).unwrap();
        assert_eq!(
            out.detokenize(),
            "I went to the market and bought red apples."
        );
        assert_eq!(out.len(), 9);
    }

    #[test]
    fn expand_identity() {
        let hyp = seq("a b c d");
        let out = expand(&hyp, &[Command::MoveForward(4)], ExpandMode::Strict).unwrap();
        assert_eq!(out, hyp);
    }

    #[test]
    fn expand_pointer_overflow() {
        let hyp = seq("a b");
        for mode in [ExpandMode::Strict, ExpandMode::Lenient] {
            let err = expand(&hyp, &[Command::MoveForward(3)], mode).unwrap_err();
            assert_eq!(
                err,
                ExpansionError::PointerOverflow {
                    command_index: 0,
                    pointer: 1,
                    count: 3,
                    hyp_len: 2,
                }
            );
        }
    }

    #[test]
    fn expand_lenient_carries_tail_strict_rejects_it() {
        let hyp = seq("a b c");
        let commands = [Command::MoveForward(1)];
        let lenient = expand(&hyp, &commands, ExpandMode::Lenient).unwrap();
        assert_eq!(lenient, hyp);
        let err = expand(&hyp, &commands, ExpandMode::Strict).unwrap_err();
        assert_eq!(
            err,
            ExpansionError::UnconsumedInput {
                command_index: 1,
                pointer: 2,
                hyp_len: 3,
            }
        );
    }

    #[test]
    fn expand_accepts_adjacent_same_kind_commands() {
        // The compiler never produces these, but a generator may.
        let hyp = seq("a b c");
        let commands = [Command::MoveForward(1), Command::MoveForward(2)];
        let out = expand(&hyp, &commands, ExpandMode::Strict).unwrap();
        assert_eq!(out, hyp);
    }

    #[test]
    fn command_stats_examples() {
        let commands = vec![
            Command::MoveForward(4),
            Command::Replace(1, words(&["market"])),
            Command::MoveForward(2),
            Command::Insert(words(&["red"])),
            Command::MoveForward(1),
        ];
        let stats = command_stats(&commands);
        assert_eq!(stats.move_forward, 3);
        assert_eq!(stats.replace, 1);
        assert_eq!(stats.insert, 1);
        assert_eq!(stats.delete, 0);
        assert_eq!(stats.total(), commands.len());

        assert_eq!(command_stats(&[]), CommandStats::default());
    }

    fn word_vec() -> impl Strategy<Value = Vec<String>> {
        proptest::collection::vec(
            proptest::sample::select(vec!["a", "b", "c", "d", "the", "cat"]),
            0..14,
        )
        .prop_map(|ws| ws.into_iter().map(String::from).collect())
    }

    proptest! {
        #[test]
        fn compile_expand_roundtrip(h in word_vec(), r in word_vec()) {
            let hyp = TokenSeq::new(h).unwrap();
            let reference = TokenSeq::new(r).unwrap();
            let commands = compile(&align(&hyp, &reference));
            let out = expand(&hyp, &commands, ExpandMode::Strict).unwrap();
            prop_assert_eq!(out, reference);
        }

        #[test]
        fn compiled_sequences_are_canonical(h in word_vec(), r in word_vec()) {
            let hyp = TokenSeq::new(h).unwrap();
            let reference = TokenSeq::new(r).unwrap();
            let commands = compile(&align(&hyp, &reference));
            for command in &commands {
                prop_assert!(command.validate().is_ok());
            }
            for pair in commands.windows(2) {
                prop_assert_ne!(pair[0].kind(), pair[1].kind());
            }
        }

        #[test]
        fn pointer_conservation(h in word_vec(), r in word_vec()) {
            let hyp = TokenSeq::new(h).unwrap();
            let reference = TokenSeq::new(r).unwrap();
            let commands = compile(&align(&hyp, &reference));
            expand(&hyp, &commands, ExpandMode::Strict).unwrap();
            let consumed: usize = commands
                .iter()
                .filter(|c| c.kind() != CommandKind::Insert)
                .map(|c| c.count().unwrap())
                .sum();
            prop_assert_eq!(consumed, hyp.len());
        }
    }
}
