//! Textual form of the edit-command sequence.
//!
//! ```text
//! seq     := WS? (command (WS command)*)? WS?
//! command := "[MOVE_FORWARD " INT "]"
//!          | "[DELETE " INT "]"
//!          | "[INSERT " QUOTED "]"
//!          | "[REPLACE " INT " WITH " QUOTED "]"
//! QUOTED  := "'" word (" " word)* "'"     escapes: \' and \\ only
//! INT     := [1-9][0-9]*
//! ```
//!
//! This string is the wire format between a command generator and the
//! expansion engine, and the on-disk form inside corpus result files.
//! Parsing is deliberately strict (uppercase keywords, counts >= 1 with no
//! leading zeros, single spaces inside a command) so a sloppy generator is
//! surfaced instead of silently accommodated; only the whitespace *between*
//! commands may be any positive run. Offsets in [`ParseError`] are character
//! offsets into the input.

use std::fmt;

use crate::edits::Command;

/// Where and how parsing failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Character offset of the first offending position, in `[0, input len]`.
    pub position: usize,
    pub kind: ParseErrorKind,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// A bracketed form whose keyword or structure matches no known command.
    UnknownCommand,
    /// The count slot holds something other than a valid integer >= 1
    /// (or >= 0 where a zero count is legal).
    BadCount,
    /// A quoted payload was opened but never closed, or was cut by raw
    /// whitespace other than the single-space word separator.
    UnterminatedQuote,
    /// A payload with no words, or an empty word inside a payload.
    EmptyPayload,
    /// Non-whitespace text where a command is expected.
    TrailingGarbage,
    /// A backslash followed by anything other than `'` or `\`.
    BadEscape,
}

impl ParseError {
    fn new(position: usize, kind: ParseErrorKind, detail: impl Into<String>) -> Self {
        ParseError {
            position,
            kind,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at offset {}: {} ({:?})",
            self.position, self.detail, self.kind
        )
    }
}

impl std::error::Error for ParseError {}

/// Render a command list in the surface grammar, commands joined by single
/// spaces. The empty list renders as `""`.
pub fn serialize(commands: &[Command]) -> String {
    let rendered: Vec<String> = commands.iter().map(Command::to_string).collect();
    rendered.join(" ")
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::MoveForward(n) => write!(f, "[MOVE_FORWARD {n}]"),
            Command::Delete(n) => write!(f, "[DELETE {n}]"),
            Command::Insert(words) => write!(f, "[INSERT {}]", quote_words(words)),
            Command::Replace(n, words) => {
                write!(f, "[REPLACE {n} WITH {}]", quote_words(words))
            }
        }
    }
}

/// Quote payload words: single spaces between words, `'` and `\` escaped.
pub(crate) fn quote_words(words: &[String]) -> String {
    let mut out = String::from("'");
    for (i, word) in words.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        for ch in word.chars() {
            match ch {
                '\'' => out.push_str("\\'"),
                '\\' => out.push_str("\\\\"),
                c => out.push(c),
            }
        }
    }
    out.push('\'');
    out
}

/// Parse a command sequence. Total over arbitrary input: every failure is a
/// structured [`ParseError`], never a panic.
pub fn parse(input: &str) -> Result<Vec<Command>, ParseError> {
    let mut scanner = Scanner::new(input);
    let mut commands = Vec::new();
    scanner.skip_ws();
    while !scanner.is_eof() {
        if scanner.peek() != Some('[') {
            return Err(ParseError::new(
                scanner.pos(),
                ParseErrorKind::TrailingGarbage,
                "expected '[' to start a command",
            ));
        }
        commands.push(parse_command(&mut scanner)?);
        if scanner.is_eof() {
            break;
        }
        if !scanner.skip_ws() {
            return Err(ParseError::new(
                scanner.pos(),
                ParseErrorKind::TrailingGarbage,
                "expected whitespace between commands",
            ));
        }
    }
    Ok(commands)
}

fn parse_command(scanner: &mut Scanner) -> Result<Command, ParseError> {
    scanner.bump(); // consume '['
    let keyword_pos = scanner.pos();
    let keyword = scanner.take_keyword();
    match keyword.as_str() {
        "MOVE_FORWARD" => {
            let n = scanner.expect_count(false)?;
            scanner.expect_close_after_count()?;
            Ok(Command::MoveForward(n))
        }
        "DELETE" => {
            let n = scanner.expect_count(false)?;
            scanner.expect_close_after_count()?;
            Ok(Command::Delete(n))
        }
        "INSERT" => {
            scanner.expect_payload_space()?;
            let words = scanner.read_quoted(false)?;
            scanner.expect_close_after_payload()?;
            Ok(Command::Insert(words))
        }
        "REPLACE" => {
            let n = scanner.expect_count(false)?;
            scanner.expect_literal(
                " WITH ",
                ParseErrorKind::BadCount,
                "expected ' WITH ' after count",
            )?;
            let words = scanner.read_quoted(false)?;
            scanner.expect_close_after_payload()?;
            Ok(Command::Replace(n, words))
        }
        other => Err(ParseError::new(
            keyword_pos,
            ParseErrorKind::UnknownCommand,
            format!("unknown command keyword {other:?}"),
        )),
    }
}

/// Character-offset scanner shared by the command parser and the baseline
/// payload parsers.
pub(crate) struct Scanner {
    chars: Vec<char>,
    pos: usize,
}

impl Scanner {
    pub(crate) fn new(input: &str) -> Self {
        Scanner {
            chars: input.chars().collect(),
            pos: 0,
        }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    pub(crate) fn is_eof(&self) -> bool {
        self.pos >= self.chars.len()
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, expected: char) -> bool {
        if self.peek() == Some(expected) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Skip a run of whitespace; report whether anything was skipped.
    pub(crate) fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
        self.pos > start
    }

    /// Read a run of `A`-`Z` and `_` (the keyword alphabet).
    pub(crate) fn take_keyword(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_uppercase() || c == '_' {
                out.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        out
    }

    /// A single space followed by an integer.
    pub(crate) fn expect_count(&mut self, allow_zero: bool) -> Result<usize, ParseError> {
        if !self.eat(' ') {
            return Err(ParseError::new(
                self.pos,
                ParseErrorKind::BadCount,
                "expected ' ' and a count",
            ));
        }
        self.read_count(allow_zero)
    }

    pub(crate) fn read_count(&mut self, allow_zero: bool) -> Result<usize, ParseError> {
        let start = self.pos;
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return Err(ParseError::new(
                start,
                ParseErrorKind::BadCount,
                "expected a count",
            ));
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return Err(ParseError::new(
                start,
                ParseErrorKind::BadCount,
                "counts cannot carry leading zeros",
            ));
        }
        if digits == "0" && !allow_zero {
            return Err(ParseError::new(
                start,
                ParseErrorKind::BadCount,
                "count must be at least 1",
            ));
        }
        digits
            .parse::<usize>()
            .map_err(|_| ParseError::new(start, ParseErrorKind::BadCount, "count out of range"))
    }

    pub(crate) fn expect_close_after_count(&mut self) -> Result<(), ParseError> {
        if self.eat(']') {
            Ok(())
        } else {
            Err(ParseError::new(
                self.pos,
                ParseErrorKind::BadCount,
                "expected ']' after count",
            ))
        }
    }

    pub(crate) fn expect_close_after_payload(&mut self) -> Result<(), ParseError> {
        if self.eat(']') {
            Ok(())
        } else {
            Err(ParseError::new(
                self.pos,
                ParseErrorKind::UnknownCommand,
                "expected ']' after payload",
            ))
        }
    }

    /// The single space that separates a keyword from its quoted payload.
    pub(crate) fn expect_payload_space(&mut self) -> Result<(), ParseError> {
        if self.eat(' ') {
            Ok(())
        } else {
            Err(ParseError::new(
                self.pos,
                ParseErrorKind::EmptyPayload,
                "expected ' ' and a quoted payload",
            ))
        }
    }

    /// Match `literal` exactly, reporting `kind`/`detail` at the first
    /// mismatching character.
    pub(crate) fn expect_literal(
        &mut self,
        literal: &str,
        kind: ParseErrorKind,
        detail: &str,
    ) -> Result<(), ParseError> {
        for expected in literal.chars() {
            if !self.eat(expected) {
                return Err(ParseError::new(self.pos, kind, detail));
            }
        }
        Ok(())
    }

    /// A quoted word list. `allow_empty` admits `''` (used by baseline
    /// payloads where an empty replacement is meaningful); the command
    /// grammar itself always requires at least one word.
    pub(crate) fn read_quoted(&mut self, allow_empty: bool) -> Result<Vec<String>, ParseError> {
        let quote_pos = self.pos;
        if !self.eat('\'') {
            return Err(ParseError::new(
                quote_pos,
                ParseErrorKind::EmptyPayload,
                "expected quoted payload",
            ));
        }
        let mut words = Vec::new();
        let mut current = String::new();
        loop {
            let char_pos = self.pos;
            match self.bump() {
                None => {
                    return Err(ParseError::new(
                        quote_pos,
                        ParseErrorKind::UnterminatedQuote,
                        "payload quote never closed",
                    ));
                }
                Some('\'') => {
                    if !current.is_empty() {
                        words.push(std::mem::take(&mut current));
                        return Ok(words);
                    }
                    if words.is_empty() {
                        if allow_empty {
                            return Ok(words);
                        }
                        return Err(ParseError::new(
                            quote_pos,
                            ParseErrorKind::EmptyPayload,
                            "payload must contain at least one word",
                        ));
                    }
                    return Err(ParseError::new(
                        char_pos,
                        ParseErrorKind::EmptyPayload,
                        "space before closing quote makes an empty word",
                    ));
                }
                Some(' ') => {
                    if current.is_empty() {
                        return Err(ParseError::new(
                            char_pos,
                            ParseErrorKind::EmptyPayload,
                            "empty payload word",
                        ));
                    }
                    words.push(std::mem::take(&mut current));
                }
                Some('\\') => match self.bump() {
                    Some(escaped @ ('\'' | '\\')) => current.push(escaped),
                    Some(other) => {
                        return Err(ParseError::new(
                            char_pos,
                            ParseErrorKind::BadEscape,
                            format!("invalid escape sequence \\{other}"),
                        ));
                    }
                    None => {
                        return Err(ParseError::new(
                            char_pos,
                            ParseErrorKind::BadEscape,
                            "incomplete escape at end of input",
                        ));
                    }
                },
                // Payload words may not contain whitespace, and only the
                // single space separates words; any other whitespace breaks
                // the quote like a newline breaks a string literal.
                Some(c) if c.is_whitespace() => {
                    return Err(ParseError::new(
                        char_pos,
                        ParseErrorKind::UnterminatedQuote,
                        "quoted payload interrupted by whitespace",
                    ));
                }
                Some(c) => current.push(c),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn serialize_worked_example() {
        let commands = vec![
            Command::MoveForward(4),
            Command::Replace(1, words(&["market"])),
            Command::MoveForward(2),
            Command::Insert(words(&["red"])),
            Command::MoveForward(1),
        ];
        assert_eq!(
            serialize(&commands),
            "[MOVE_FORWARD 4] [REPLACE 1 WITH 'market'] [MOVE_FORWARD 2] [INSERT 'red'] [MOVE_FORWARD 1]"
        );
    }

    #[test]
    fn serialize_escapes_apostrophes_and_backslashes() {
        let commands = vec![Command::Replace(1, words(&["They're"]))];
        assert_eq!(serialize(&commands), "[REPLACE 1 WITH 'They\\'re']");

        let commands = vec![Command::Insert(words(&["a\\b"]))];
        assert_eq!(serialize(&commands), "[INSERT 'a\\\\b']");
    }

    #[test]
    fn serialize_empty_sequence() {
        assert_eq!(serialize(&[]), "");
    }

    #[test]
    fn parse_single_move_forward() {
        assert_eq!(
            parse("[MOVE_FORWARD 10]").unwrap(),
            vec![Command::MoveForward(10)]
        );
    }

    #[test]
    fn parse_empty_and_whitespace_input() {
        assert_eq!(parse("").unwrap(), vec![]);
        assert_eq!(parse("  \n\t ").unwrap(), vec![]);
    }

    #[test]
    fn parse_flexible_whitespace_between_commands() {
        let parsed = parse("  [DELETE 2]\n\t [INSERT 'x']  ").unwrap();
        assert_eq!(
            parsed,
            vec![Command::Delete(2), Command::Insert(words(&["x"]))]
        );
    }

    #[test]
    fn parse_escaped_payload() {
        assert_eq!(
            parse("[REPLACE 1 WITH 'They\\'re']").unwrap(),
            vec![Command::Replace(1, words(&["They're"]))]
        );
        assert_eq!(
            parse("[INSERT 'a\\\\b c']").unwrap(),
            vec![Command::Insert(words(&["a\\b", "c"]))]
        );
    }

    #[test]
    fn parse_error_bad_count() {
        let err = parse("[DELETE 0]").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadCount);
        assert_eq!(err.position, 8);

        assert_eq!(
            parse("[DELETE 01]").unwrap_err().kind,
            ParseErrorKind::BadCount
        );
        assert_eq!(
            parse("[DELETE x]").unwrap_err().kind,
            ParseErrorKind::BadCount
        );
        assert_eq!(
            parse("[DELETE 99999999999999999999999]").unwrap_err().kind,
            ParseErrorKind::BadCount
        );
        assert_eq!(
            parse("[MOVE_FORWARD 1 ]").unwrap_err().kind,
            ParseErrorKind::BadCount
        );
        assert_eq!(
            parse("[REPLACE 1 WALRUS 'x']").unwrap_err().kind,
            ParseErrorKind::BadCount
        );
    }

    #[test]
    fn parse_error_empty_payload() {
        let err = parse("[INSERT '']").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EmptyPayload);

        assert_eq!(
            parse("[INSERT 'a  b']").unwrap_err().kind,
            ParseErrorKind::EmptyPayload
        );
        assert_eq!(
            parse("[INSERT ' a']").unwrap_err().kind,
            ParseErrorKind::EmptyPayload
        );
        assert_eq!(
            parse("[INSERT 'a ']").unwrap_err().kind,
            ParseErrorKind::EmptyPayload
        );
        assert_eq!(
            parse("[INSERT ]").unwrap_err().kind,
            ParseErrorKind::EmptyPayload
        );
    }

    #[test]
    fn parse_error_unterminated_quote() {
        let err = parse("[INSERT 'abc").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnterminatedQuote);
        assert_eq!(err.position, 8);

        assert_eq!(
            parse("[INSERT 'a\tb']").unwrap_err().kind,
            ParseErrorKind::UnterminatedQuote
        );
    }

    #[test]
    fn parse_error_trailing_garbage() {
        let err = parse("[DELETE 1] junk").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::TrailingGarbage);
        assert_eq!(err.position, 11);

        assert_eq!(
            parse("junk").unwrap_err().kind,
            ParseErrorKind::TrailingGarbage
        );
        // Strict: commands must be separated by whitespace.
        assert_eq!(
            parse("[DELETE 1][DELETE 2]").unwrap_err().kind,
            ParseErrorKind::TrailingGarbage
        );
    }

    #[test]
    fn parse_error_bad_escape() {
        let err = parse("[INSERT 'a\\x']").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadEscape);
        assert_eq!(err.position, 10);

        assert_eq!(
            parse("[INSERT 'a\\").unwrap_err().kind,
            ParseErrorKind::BadEscape
        );
    }

    #[test]
    fn parse_error_unknown_command() {
        let err = parse("[JUMP 3]").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownCommand);
        assert_eq!(err.position, 1);

        // Lowercase keywords are a generator defect, not a synonym.
        assert_eq!(
            parse("[delete 1]").unwrap_err().kind,
            ParseErrorKind::UnknownCommand
        );
        // An unescaped apostrophe closes the quote early.
        assert_eq!(
            parse("[INSERT 'They're']").unwrap_err().kind,
            ParseErrorKind::UnknownCommand
        );
    }

    fn payload_word() -> impl Strategy<Value = String> {
        "[a-zA-Z0-9'\\\\.,\\[\\]{}!?-]{1,8}"
    }

    fn command_strategy() -> impl Strategy<Value = Command> {
        let payload = || proptest::collection::vec(payload_word(), 1..4);
        prop_oneof![
            (1usize..60).prop_map(Command::MoveForward),
            (1usize..60).prop_map(Command::Delete),
            payload().prop_map(Command::Insert),
            ((1usize..60), payload()).prop_map(|(n, w)| Command::Replace(n, w)),
        ]
    }

    proptest! {
        #[test]
        fn roundtrip_parse_serialize(commands in proptest::collection::vec(command_strategy(), 0..10)) {
            let wire = serialize(&commands);
            prop_assert_eq!(parse(&wire).unwrap(), commands);
        }

        #[test]
        fn parser_is_total_on_arbitrary_input(input in "\\PC*") {
            match parse(&input) {
                Ok(_) => {}
                Err(err) => {
                    prop_assert!(err.position <= input.chars().count());
                }
            }
        }
    }
}
