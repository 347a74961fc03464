//! The competing compact representations, behind one compile/expand surface.
//!
//! Payload grammars (all structurally parallel to the command grammar, with
//! the same quoting and escaping rules; positions are 1-based):
//!
//! * full rewrite: the reference text verbatim.
//! * span: `[SPAN start end 'replacement']` entries, end exclusive;
//!   `start == end` inserts before `start`; `''` deletes.
//! * phrase pair: `[PAIR 'src' -> 'tgt']` entries; a pure insertion anchors
//!   on one word of context; expansion replaces the first unconsumed
//!   occurrence of `src`, so a `src` that repeats earlier in the hypothesis
//!   can mis-anchor. That fragility is the point of carrying this baseline
//!   and is deliberately not patched with indices.
//! * target only: `[AT 'anchor' PUT 'words' SUB k]` entries; `'^'` anchors
//!   at the start. Pure deletions are inexpressible and are silently
//!   dropped at compile time.

use thiserror::Error;

use serde::{Deserialize, Serialize};

use crate::aligner::Alignment;
use crate::edits::EditKind;
use crate::engine::{self, ExpandMode, ExpansionError};
use crate::grammar::{self, quote_words, ParseError, ParseErrorKind, Scanner};
use crate::tokens::{tokenize, TokenSeq};

/// The edit representations the harness can compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ceger,
    FullRewrite,
    Span,
    PhrasePair,
    TargetOnly,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Ceger,
        Method::FullRewrite,
        Method::Span,
        Method::PhrasePair,
        Method::TargetOnly,
    ];
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            Method::Ceger => "CEGER",
            Method::FullRewrite => "full rewrite",
            Method::Span => "span",
            Method::PhrasePair => "phrase pair",
            Method::TargetOnly => "target only",
        };
        f.write_str(label)
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ceger" => Ok(Method::Ceger),
            "full" | "full_rewrite" => Ok(Method::FullRewrite),
            "span" => Ok(Method::Span),
            "phrase" | "phrase_pair" => Ok(Method::PhrasePair),
            "target" | "target_only" => Ok(Method::TargetOnly),
            other => Err(format!(
                "unknown method '{other}' (expected ceger, full, span, phrase, or target)"
            )),
        }
    }
}

/// A compiled edit payload plus its whitespace-token cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub method: Method,
    pub payload: String,
    /// Number of whitespace-separated tokens in `payload`, the unit used
    /// for all output-length comparisons.
    pub token_count: usize,
}

impl Representation {
    pub fn new(method: Method, payload: String) -> Self {
        let token_count = payload_token_count(&payload);
        Representation {
            method,
            payload,
            token_count,
        }
    }
}

pub(crate) fn payload_token_count(payload: &str) -> usize {
    payload.split_whitespace().count()
}

/// Expansion failures specific to the baseline payloads.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaselineError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("span [{start}, {end}) overlaps the previous span ending at {previous_end}")]
    SpanOverlap {
        start: usize,
        end: usize,
        previous_end: usize,
    },
    #[error("span [{start}, {end}) is outside a {hyp_len}-word hypothesis")]
    SpanOutOfRange {
        start: usize,
        end: usize,
        hyp_len: usize,
    },
    #[error("source phrase {phrase:?} not found in the unconsumed hypothesis")]
    PhraseNotFound { phrase: String },
    #[error("anchor {anchor:?} not found in the unconsumed hypothesis")]
    AnchorNotFound { anchor: String },
    #[error("substitution of {count} words after position {pointer} exceeds a {hyp_len}-word hypothesis")]
    TargetOutOfRange {
        pointer: usize,
        count: usize,
        hyp_len: usize,
    },
}

/// One maximal run of non-Match ops, with enough context to compile any of
/// the baseline payloads.
struct EditRegion {
    /// 1-based hypothesis position of the first consumed word, or the
    /// insertion point for a pure insertion.
    start: usize,
    hyp_words: Vec<String>,
    ref_words: Vec<String>,
    /// Nearest Match word before the region, if any.
    anchor: Option<String>,
}

fn edit_regions(alignment: &Alignment) -> Vec<EditRegion> {
    let mut regions = Vec::new();
    let mut position = 1usize;
    let mut last_match: Option<String> = None;
    let mut current: Option<EditRegion> = None;

    for op in alignment.ops() {
        if op.kind() == EditKind::Match {
            if let Some(region) = current.take() {
                regions.push(region);
            }
            last_match = op.hyp_words().last().cloned();
            position += op.hyp_words().len();
        } else {
            let region = current.get_or_insert_with(|| EditRegion {
                start: position,
                hyp_words: Vec::new(),
                ref_words: Vec::new(),
                anchor: last_match.clone(),
            });
            region.hyp_words.extend_from_slice(op.hyp_words());
            region.ref_words.extend_from_slice(op.ref_words());
            position += op.hyp_words().len();
        }
    }
    if let Some(region) = current.take() {
        regions.push(region);
    }
    regions
}

fn hyp_words_of(alignment: &Alignment) -> Vec<String> {
    alignment
        .ops()
        .iter()
        .flat_map(|op| op.hyp_words().to_vec())
        .collect()
}

fn ref_words_of(alignment: &Alignment) -> Vec<String> {
    alignment
        .ops()
        .iter()
        .flat_map(|op| op.ref_words().to_vec())
        .collect()
}

/// The reference text verbatim; expansion ignores the hypothesis.
pub fn compile_full_rewrite(alignment: &Alignment) -> Representation {
    Representation::new(Method::FullRewrite, ref_words_of(alignment).join(" "))
}

pub fn expand_full_rewrite(_hyp: &TokenSeq, payload: &str) -> TokenSeq {
    tokenize(payload, false)
}

pub fn compile_span(alignment: &Alignment) -> Representation {
    let entries: Vec<String> = edit_regions(alignment)
        .iter()
        .map(|region| {
            format!(
                "[SPAN {} {} {}]",
                region.start,
                region.start + region.hyp_words.len(),
                quote_words(&region.ref_words)
            )
        })
        .collect();
    Representation::new(Method::Span, entries.join(" "))
}

/// Apply span edits left to right over `hyp`.
pub fn expand_span(hyp: &TokenSeq, payload: &str) -> Result<TokenSeq, BaselineError> {
    let entries = parse_span_payload(payload)?;
    let words = hyp.words();
    let hyp_len = words.len();
    let mut output: Vec<String> = Vec::with_capacity(hyp_len);
    let mut next_unconsumed = 1usize;

    for entry in entries {
        let (start, end) = (entry.start, entry.end);
        if start > end || start > hyp_len + 1 || end > hyp_len + 1 {
            return Err(BaselineError::SpanOutOfRange {
                start,
                end,
                hyp_len,
            });
        }
        if start < next_unconsumed {
            return Err(BaselineError::SpanOverlap {
                start,
                end,
                previous_end: next_unconsumed,
            });
        }
        output.extend_from_slice(&words[next_unconsumed - 1..start - 1]);
        output.extend(entry.replacement);
        next_unconsumed = end;
    }
    output.extend_from_slice(&words[next_unconsumed - 1..]);
    Ok(TokenSeq::from_validated(output))
}

pub fn compile_phrase_pair(alignment: &Alignment) -> Representation {
    let hyp_words = hyp_words_of(alignment);
    let entries: Vec<String> = edit_regions(alignment)
        .iter()
        .map(|region| {
            let (src, tgt) = if !region.hyp_words.is_empty() {
                (region.hyp_words.clone(), region.ref_words.clone())
            } else if let Some(anchor) = &region.anchor {
                // Pure insertion after some matched word: anchor on it.
                let mut tgt = vec![anchor.clone()];
                tgt.extend_from_slice(&region.ref_words);
                (vec![anchor.clone()], tgt)
            } else if let Some(following) = hyp_words.get(region.start - 1) {
                // Pure insertion at the very start: anchor on the word after.
                let mut tgt = region.ref_words.clone();
                tgt.push(following.clone());
                (vec![following.clone()], tgt)
            } else {
                // Empty hypothesis: nothing to anchor on.
                (Vec::new(), region.ref_words.clone())
            };
            format!("[PAIR {} -> {}]", quote_words(&src), quote_words(&tgt))
        })
        .collect();
    Representation::new(Method::PhrasePair, entries.join(" "))
}

/// Replace the first unconsumed occurrence of each source phrase.
pub fn expand_phrase_pair(hyp: &TokenSeq, payload: &str) -> Result<TokenSeq, BaselineError> {
    let entries = parse_phrase_payload(payload)?;
    let words = hyp.words();
    let mut output: Vec<String> = Vec::with_capacity(words.len());
    let mut consumed = 0usize;

    for entry in entries {
        if entry.src.is_empty() {
            output.extend(entry.tgt);
            continue;
        }
        let found = find_subsequence(&words[consumed..], &entry.src).ok_or_else(|| {
            BaselineError::PhraseNotFound {
                phrase: entry.src.join(" "),
            }
        })?;
        let at = consumed + found;
        output.extend_from_slice(&words[consumed..at]);
        output.extend(entry.tgt);
        consumed = at + entry.src.len();
    }
    output.extend_from_slice(&words[consumed..]);
    Ok(TokenSeq::from_validated(output))
}

/// Anchor token for an edit with no preceding matched word.
const START_ANCHOR: &str = "^";

pub fn compile_target_only(alignment: &Alignment) -> Representation {
    let entries: Vec<String> = edit_regions(alignment)
        .iter()
        .filter(|region| !region.ref_words.is_empty()) // pure deletions are inexpressible
        .map(|region| {
            let anchor = vec![region
                .anchor
                .clone()
                .unwrap_or_else(|| START_ANCHOR.to_string())];
            format!(
                "[AT {} PUT {} SUB {}]",
                quote_words(&anchor),
                quote_words(&region.ref_words),
                region.hyp_words.len()
            )
        })
        .collect();
    Representation::new(Method::TargetOnly, entries.join(" "))
}

/// Emit `PUT` words after the first unconsumed anchor occurrence, skipping
/// `SUB` hypothesis words in place of the emitted ones.
pub fn expand_target_only(hyp: &TokenSeq, payload: &str) -> Result<TokenSeq, BaselineError> {
    let entries = parse_target_payload(payload)?;
    let words = hyp.words();
    let hyp_len = words.len();
    let mut output: Vec<String> = Vec::with_capacity(hyp_len);
    let mut consumed = 0usize;

    for entry in entries {
        let after_anchor = if entry.anchor == [START_ANCHOR] {
            consumed
        } else {
            let found = find_subsequence(&words[consumed..], &entry.anchor).ok_or_else(|| {
                BaselineError::AnchorNotFound {
                    anchor: entry.anchor.join(" "),
                }
            })?;
            let end = consumed + found + entry.anchor.len();
            output.extend_from_slice(&words[consumed..end]);
            end
        };
        output.extend(entry.put);
        let next = after_anchor.checked_add(entry.sub_count).filter(|&n| n <= hyp_len);
        consumed = next.ok_or(BaselineError::TargetOutOfRange {
            pointer: after_anchor,
            count: entry.sub_count,
            hyp_len,
        })?;
    }
    output.extend_from_slice(&words[consumed..]);
    Ok(TokenSeq::from_validated(output))
}

fn find_subsequence(haystack: &[String], needle: &[String]) -> Option<usize> {
    if needle.is_empty() || needle.len() > haystack.len() {
        return None;
    }
    haystack
        .windows(needle.len())
        .position(|window| window == needle)
}

struct SpanEdit {
    start: usize,
    end: usize,
    replacement: Vec<String>,
}

struct PhraseEdit {
    src: Vec<String>,
    tgt: Vec<String>,
}

struct TargetEdit {
    anchor: Vec<String>,
    put: Vec<String>,
    sub_count: usize,
}

fn parse_entries<T>(
    payload: &str,
    keyword: &str,
    parse_body: impl Fn(&mut Scanner) -> Result<T, ParseError>,
) -> Result<Vec<T>, ParseError> {
    let mut scanner = Scanner::new(payload);
    let mut entries = Vec::new();
    scanner.skip_ws();
    while !scanner.is_eof() {
        if scanner.peek() != Some('[') {
            return Err(ParseError {
                position: scanner.pos(),
                kind: ParseErrorKind::TrailingGarbage,
                detail: format!("expected '[' to start a {keyword} entry"),
            });
        }
        scanner.bump();
        let keyword_pos = scanner.pos();
        let found = scanner.take_keyword();
        if found != keyword {
            return Err(ParseError {
                position: keyword_pos,
                kind: ParseErrorKind::UnknownCommand,
                detail: format!("expected {keyword} entry, found {found:?}"),
            });
        }
        entries.push(parse_body(&mut scanner)?);
        if scanner.is_eof() {
            break;
        }
        if !scanner.skip_ws() {
            return Err(ParseError {
                position: scanner.pos(),
                kind: ParseErrorKind::TrailingGarbage,
                detail: "expected whitespace between entries".to_string(),
            });
        }
    }
    Ok(entries)
}

fn parse_span_payload(payload: &str) -> Result<Vec<SpanEdit>, ParseError> {
    parse_entries(payload, "SPAN", |scanner| {
        let start = scanner.expect_count(false)?;
        let end = scanner.expect_count(false)?;
        scanner.expect_payload_space()?;
        let replacement = scanner.read_quoted(true)?;
        scanner.expect_close_after_payload()?;
        Ok(SpanEdit {
            start,
            end,
            replacement,
        })
    })
}

fn parse_phrase_payload(payload: &str) -> Result<Vec<PhraseEdit>, ParseError> {
    parse_entries(payload, "PAIR", |scanner| {
        scanner.expect_payload_space()?;
        let src = scanner.read_quoted(true)?;
        scanner.expect_literal(
            " -> ",
            ParseErrorKind::UnknownCommand,
            "expected ' -> ' between phrases",
        )?;
        let tgt = scanner.read_quoted(true)?;
        scanner.expect_close_after_payload()?;
        Ok(PhraseEdit { src, tgt })
    })
}

fn parse_target_payload(payload: &str) -> Result<Vec<TargetEdit>, ParseError> {
    parse_entries(payload, "AT", |scanner| {
        scanner.expect_payload_space()?;
        let anchor = scanner.read_quoted(false)?;
        scanner.expect_literal(
            " PUT ",
            ParseErrorKind::UnknownCommand,
            "expected ' PUT ' after anchor",
        )?;
        let put = scanner.read_quoted(false)?;
        scanner.expect_literal(
            " SUB ",
            ParseErrorKind::UnknownCommand,
            "expected ' SUB ' after words",
        )?;
        let sub_count = scanner.read_count(true)?;
        scanner.expect_close_after_count()?;
        Ok(TargetEdit {
            anchor,
            put,
            sub_count,
        })
    })
}

/// Any failure while turning a payload back into text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentationError {
    #[error("payload parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("expansion error: {0}")]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
}

/// Compile `alignment` into the given method's payload.
pub fn compile_representation(method: Method, alignment: &Alignment) -> Representation {
    match method {
        Method::Ceger => Representation::new(
            Method::Ceger,
            grammar::serialize(&engine::compile(alignment)),
        ),
        Method::FullRewrite => compile_full_rewrite(alignment),
        Method::Span => compile_span(alignment),
        Method::PhrasePair => compile_phrase_pair(alignment),
        Method::TargetOnly => compile_target_only(alignment),
    }
}

/// Expand a serialized payload over `hyp`. The payload is always parsed
/// from its textual form, so this exercises the full wire format.
/// `mode` applies to the command grammar only.
pub fn expand_representation(
    method: Method,
    hyp: &TokenSeq,
    payload: &str,
    mode: ExpandMode,
) -> Result<TokenSeq, RepresentationError> {
    match method {
        Method::Ceger => {
            let commands = grammar::parse(payload)?;
            Ok(engine::expand(hyp, &commands, mode)?)
        }
        Method::FullRewrite => Ok(expand_full_rewrite(hyp, payload)),
        Method::Span => Ok(expand_span(hyp, payload)?),
        Method::PhrasePair => Ok(expand_phrase_pair(hyp, payload)?),
        Method::TargetOnly => Ok(expand_target_only(hyp, payload)?),
    }
}
