//! Word-level minimum-edit alignment, edit distance, and WER.
//!
//! Costs are fixed at unit (match 0, substitute/insert/delete 1). The
//! backtrace is deterministic: where several minimum-cost paths exist it
//! prefers Match, then Substitute, then Delete, then Insert, so identical
//! inputs always yield identical op sequences. The full DP matrix is kept;
//! utterances are short enough that no space refinement is needed.

use thiserror::Error;

use crate::edits::{EditKind, EditOp};
use crate::tokens::TokenSeq;

/// A unit-op alignment between a hypothesis and a reference.
///
/// Every op consumes/produces exactly one word on its populated sides.
/// Concatenating `hyp_words` over the ops reproduces the hypothesis,
/// concatenating `ref_words` reproduces the reference, and the number of
/// non-Match ops equals the Levenshtein distance between the two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    ops: Vec<EditOp>,
    hyp_len: usize,
    ref_len: usize,
}

/// Rejections for hand-built alignments.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignmentError {
    #[error("op {index} is not a unit op")]
    NotUnitOp { index: usize },
    #[error("op {index} is a Match whose word is invalid")]
    InvalidWord { index: usize },
}

impl Alignment {
    /// Assemble an alignment from unit ops, validating unit-ness.
    pub fn from_unit_ops(ops: Vec<EditOp>) -> Result<Self, AlignmentError> {
        let mut hyp_len = 0;
        let mut ref_len = 0;
        for (index, op) in ops.iter().enumerate() {
            let (h, r) = (op.hyp_words().len(), op.ref_words().len());
            let unit = match op.kind() {
                EditKind::Match | EditKind::Substitute => h == 1 && r == 1,
                EditKind::Insert => h == 0 && r == 1,
                EditKind::Delete => h == 1 && r == 0,
            };
            if !unit {
                return Err(AlignmentError::NotUnitOp { index });
            }
            if op
                .hyp_words()
                .iter()
                .chain(op.ref_words())
                .any(|w| w.is_empty() || w.chars().any(char::is_whitespace))
            {
                return Err(AlignmentError::InvalidWord { index });
            }
            hyp_len += h;
            ref_len += r;
        }
        Ok(Alignment {
            ops,
            hyp_len,
            ref_len,
        })
    }

    pub fn ops(&self) -> &[EditOp] {
        &self.ops
    }

    pub fn hyp_len(&self) -> usize {
        self.hyp_len
    }

    pub fn ref_len(&self) -> usize {
        self.ref_len
    }

    /// Number of non-Match ops; equals the edit distance.
    pub fn error_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| op.kind() != EditKind::Match)
            .count()
    }

    /// Per-kind error counts for this alignment.
    pub fn breakdown(&self) -> WerBreakdown {
        let mut b = WerBreakdown {
            substitutions: 0,
            deletions: 0,
            insertions: 0,
            ref_len: self.ref_len,
        };
        for op in &self.ops {
            match op.kind() {
                EditKind::Match => {}
                EditKind::Substitute => b.substitutions += 1,
                EditKind::Delete => b.deletions += 1,
                EditKind::Insert => b.insertions += 1,
            }
        }
        b
    }
}

/// WER error counts; `wer()` is (S + D + I) / ref_len.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WerBreakdown {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub ref_len: usize,
}

impl WerBreakdown {
    pub fn errors(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }

    /// The word error rate. A zero-length reference (only legal when the
    /// hypothesis is empty too) yields 0.0.
    pub fn wer(&self) -> f64 {
        if self.ref_len == 0 {
            0.0
        } else {
            self.errors() as f64 / self.ref_len as f64
        }
    }
}

/// `wer` was asked to score a non-empty hypothesis against an empty reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("reference is empty but hypothesis has {hyp_len} words")]
pub struct EmptyReferenceError {
    pub hyp_len: usize,
}

/// Align `hyp` to `reference` under unit costs.
pub fn align(hyp: &TokenSeq, reference: &TokenSeq) -> Alignment {
    let hw = hyp.words();
    let rw = reference.words();
    let m = hw.len();
    let n = rw.len();
    let width = n + 1;

    // d[i*width + j] = distance between hyp[..i] and ref[..j]
    let mut d = vec![0usize; (m + 1) * width];
    for (i, cell) in d.iter_mut().step_by(width).enumerate() {
        *cell = i;
    }
    for (j, cell) in d[..width].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=m {
        for j in 1..=n {
            let sub = d[(i - 1) * width + j - 1] + usize::from(hw[i - 1] != rw[j - 1]);
            let del = d[(i - 1) * width + j] + 1;
            let ins = d[i * width + j - 1] + 1;
            d[i * width + j] = sub.min(del).min(ins);
        }
    }

    // Backtrace, collecting ops in reverse. Preference order at each cell:
    // Match > Substitute > Delete > Insert.
    let mut ops = Vec::with_capacity(m.max(n));
    let (mut i, mut j) = (m, n);
    while i > 0 || j > 0 {
        let cur = d[i * width + j];
        if i > 0 && j > 0 && hw[i - 1] == rw[j - 1] && cur == d[(i - 1) * width + j - 1] {
            ops.push(EditOp::match_word(hw[i - 1].clone()));
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && hw[i - 1] != rw[j - 1] && cur == d[(i - 1) * width + j - 1] + 1
        {
            ops.push(EditOp::substitute_word(
                hw[i - 1].clone(),
                rw[j - 1].clone(),
            ));
            i -= 1;
            j -= 1;
        } else if i > 0 && cur == d[(i - 1) * width + j] + 1 {
            ops.push(EditOp::delete_word(hw[i - 1].clone()));
            i -= 1;
        } else {
            ops.push(EditOp::insert_word(rw[j - 1].clone()));
            j -= 1;
        }
    }
    ops.reverse();

    Alignment {
        ops,
        hyp_len: m,
        ref_len: n,
    }
}

/// Unit-cost Levenshtein distance between two token sequences.
pub fn edit_distance(a: &TokenSeq, b: &TokenSeq) -> usize {
    let aw = a.words();
    let bw = b.words();
    let n = bw.len();
    let mut prev: Vec<usize> = (0..=n).collect();
    let mut cur = vec![0usize; n + 1];
    for (i, aword) in aw.iter().enumerate() {
        cur[0] = i + 1;
        for (j, bword) in bw.iter().enumerate() {
            let sub = prev[j] + usize::from(aword != bword);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[n]
}

/// Score `hyp` against `reference`.
pub fn wer(hyp: &TokenSeq, reference: &TokenSeq) -> Result<WerBreakdown, EmptyReferenceError> {
    if reference.is_empty() && !hyp.is_empty() {
        return Err(EmptyReferenceError { hyp_len: hyp.len() });
    }
    Ok(align(hyp, reference).breakdown())
}
