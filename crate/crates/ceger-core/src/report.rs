//! Corpus-level aggregation and report rendering.
//!
//! WER aggregates pool the summed error counts over the summed reference
//! lengths (never an average of per-utterance WERs), so the result is
//! invariant under record order and parallel sharding. Records whose
//! expansion failed are scored on the raw ASR text and counted as failures;
//! excluding them would flatter fragile representations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aligner::align;
use crate::baselines::Method;
use crate::corpus::CorpusRecord;
use crate::edits::CommandKind;
use crate::engine::{command_stats, CommandStats};
use crate::grammar;
use crate::tokens::tokenize;

/// Aggregate scores for one method over a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    /// Pooled corpus WER: total (S + D + I) over total reference words.
    #[serde(rename = "wer")]
    pub corpus_wer: f64,
    /// (wer_asr - wer_method) / wer_asr; 0 when the ASR itself is perfect.
    #[serde(rename = "reduction")]
    pub relative_reduction: f64,
    /// Mean payload token count (whitespace tokens of the serialized payload).
    pub avg_output_len: f64,
    /// Records whose expansion failed (scored as raw ASR).
    pub failures: usize,
}

/// Per-kind counts of generated commands over a corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DistributionSummary {
    counts: CommandStats,
}

impl DistributionSummary {
    pub fn counts(&self) -> CommandStats {
        self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.total()
    }

    pub fn count(&self, kind: CommandKind) -> usize {
        self.counts.count(kind)
    }

    /// Percentage frequency of `kind`; 0.0 over an empty distribution.
    pub fn percentage(&self, kind: CommandKind) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            self.counts.count(kind) as f64 * 100.0 / total as f64
        }
    }

    /// Keyword-keyed percentage map, for the report.
    pub fn percentages(&self) -> BTreeMap<String, f64> {
        CommandKind::ALL
            .iter()
            .map(|&kind| (kind.keyword().to_string(), self.percentage(kind)))
            .collect()
    }
}

/// The full machine-readable report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub corpus: String,
    pub asr_wer: f64,
    pub methods: Vec<MethodSummary>,
    pub ceger_distribution: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("record {id}: stored payload does not parse: {detail}")]
    InvalidPayload { id: String, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format '{other}' (expected table or json)")),
        }
    }
}

fn pooled(errors: usize, ref_words: usize) -> f64 {
    if ref_words == 0 {
        if errors == 0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        errors as f64 / ref_words as f64
    }
}

/// Pooled WER of the raw ASR hypotheses against the references.
pub fn asr_wer(records: &[CorpusRecord], lowercase: bool) -> Result<f64, ReportError> {
    if records.is_empty() {
        return Err(ReportError::EmptyCorpus);
    }
    let mut errors = 0usize;
    let mut ref_words = 0usize;
    for record in records {
        let hyp = tokenize(&record.asr, lowercase);
        let reference = tokenize(&record.reference, lowercase);
        errors += align(&hyp, &reference).error_count();
        ref_words += reference.len();
    }
    Ok(pooled(errors, ref_words))
}

/// Aggregate one method over the corpus. Records without a result for the
/// method (or with a failed expansion) are scored on the raw ASR text and
/// counted as failures.
pub fn summarize(
    records: &[CorpusRecord],
    method: Method,
    lowercase: bool,
) -> Result<MethodSummary, ReportError> {
    if records.is_empty() {
        return Err(ReportError::EmptyCorpus);
    }
    let mut errors = 0usize;
    let mut asr_errors = 0usize;
    let mut ref_words = 0usize;
    let mut failures = 0usize;
    let mut token_total = 0usize;
    let mut payload_count = 0usize;

    for record in records {
        let reference = tokenize(&record.reference, lowercase);
        let hyp = tokenize(&record.asr, lowercase);
        ref_words += reference.len();
        asr_errors += align(&hyp, &reference).error_count();

        let output_text: &str = match record.results.get(&method) {
            Some(result) => {
                payload_count += 1;
                token_total += result.token_count;
                match &result.output {
                    Some(output) => output,
                    None => {
                        failures += 1;
                        &record.asr
                    }
                }
            }
            None => {
                failures += 1;
                &record.asr
            }
        };
        let output = tokenize(output_text, lowercase);
        errors += align(&output, &reference).error_count();
    }

    let corpus_wer = pooled(errors, ref_words);
    let wer_asr = pooled(asr_errors, ref_words);
    let relative_reduction = if wer_asr > 0.0 {
        (wer_asr - corpus_wer) / wer_asr
    } else {
        0.0
    };
    let avg_output_len = if payload_count > 0 {
        token_total as f64 / payload_count as f64
    } else {
        0.0
    };

    Ok(MethodSummary {
        method,
        corpus_wer,
        relative_reduction,
        avg_output_len,
        failures,
    })
}

/// Sum command counts over every stored command payload in the corpus.
/// Records without a command payload contribute nothing.
pub fn distribution(records: &[CorpusRecord]) -> Result<DistributionSummary, ReportError> {
    if records.is_empty() {
        return Err(ReportError::EmptyCorpus);
    }
    let mut counts = CommandStats::default();
    for record in records {
        if let Some(result) = record.results.get(&Method::Ceger) {
            let commands =
                grammar::parse(&result.payload).map_err(|err| ReportError::InvalidPayload {
                    id: record.id.clone(),
                    detail: err.to_string(),
                })?;
            counts.merge(command_stats(&commands));
        }
    }
    Ok(DistributionSummary { counts })
}

/// Assemble the full report for the given methods.
pub fn build_report(
    corpus_name: &str,
    records: &[CorpusRecord],
    methods: &[Method],
    lowercase: bool,
) -> Result<Report, ReportError> {
    let asr = asr_wer(records, lowercase)?;
    let mut summaries = Vec::with_capacity(methods.len());
    for &method in methods {
        summaries.push(summarize(records, method, lowercase)?);
    }
    let dist = distribution(records)?;
    Ok(Report {
        corpus: corpus_name.to_string(),
        asr_wer: asr,
        methods: summaries,
        ceger_distribution: dist.percentages(),
    })
}

/// Render the report. Both renderings are deterministic; the JSON form is
/// stable-key-ordered and parses back into [`Report`].
pub fn emit_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_string_pretty(report).expect("report serializes");
            out.push('\n');
            out
        }
        ReportFormat::Table => render_table(report),
    }
}

fn render_table(report: &Report) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    let _ = writeln!(out, "post-editing report for corpus '{}'", report.corpus);
    let _ = writeln!(
        out,
        "note: avg_output_len counts whitespace tokens of the serialized payload"
    );
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<14}  {:>8}  {:>9}  {:>14}  {:>8}",
        "method", "wer", "reduction", "avg_output_len", "failures"
    );
    let _ = writeln!(
        out,
        "{:<14}  {:>8.4}  {:>9}  {:>14}  {:>8}",
        "asr", report.asr_wer, "-", "-", "-"
    );
    for summary in &report.methods {
        let _ = writeln!(
            out,
            "{:<14}  {:>8.4}  {:>8.1}%  {:>14.2}  {:>8}",
            summary.method.to_string(),
            summary.corpus_wer,
            summary.relative_reduction * 100.0,
            summary.avg_output_len,
            summary.failures
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "command distribution:");
    for (keyword, pct) in &report.ceger_distribution {
        let _ = writeln!(out, "  {:<14} {:>6.2}%", keyword, pct);
    }
    out
}
