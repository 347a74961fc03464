//! Corpus records, JSONL persistence, and synthetic-corpus generation.
//!
//! Corpus files are UTF-8 JSONL, one record per line with string keys
//! `id`, `asr`, `ref`, plus an optional `results` map carrying per-method
//! payloads and expansion outputs. Blank lines are skipped.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::Method;
use crate::noise::derive_rng;
use crate::tokens::tokenize;

/// One evaluation unit: an ASR hypothesis, its reference, and whatever
/// per-method results have been attached so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub asr: String,
    #[serde(rename = "ref")]
    pub reference: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub results: BTreeMap<Method, MethodResult>,
}

impl CorpusRecord {
    pub fn new(
        id: impl Into<String>,
        asr: impl Into<String>,
        reference: impl Into<String>,
    ) -> Self {
        CorpusRecord {
            id: id.into(),
            asr: asr.into(),
            reference: reference.into(),
            results: BTreeMap::new(),
        }
    }
}

/// One method's compiled payload and, once expanded, its output or error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodResult {
    pub payload: String,
    pub token_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("line {line}: duplicate record id {id:?}")]
    DuplicateId { line: usize, id: String },
    #[error(
        "error rates must be non-negative and sum to at most 1 \
         (got sub={sub}, ins={ins}, del={del})"
    )]
    BadRates { sub: f64, ins: f64, del: f64 },
}

/// Load a JSONL corpus, in file order.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusRecord>, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_corpus(BufReader::new(file), path)
}

fn read_corpus(reader: impl Read, path: &Path) -> Result<Vec<CorpusRecord>, CorpusError> {
    let mut records = Vec::new();
    let mut seen_ids = HashSet::new();
    for (index, line) in BufReader::new(reader).lines().enumerate() {
        let line_number = index + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CorpusRecord =
            serde_json::from_str(&line).map_err(|err| CorpusError::Schema {
                line: line_number,
                message: err.to_string(),
            })?;
        if !seen_ids.insert(record.id.clone()) {
            return Err(CorpusError::DuplicateId {
                line: line_number,
                id: record.id,
            });
        }
        records.push(record);
    }
    Ok(records)
}

/// Write records as JSONL, one record per line.
pub fn save_corpus(path: impl AsRef<Path>, records: &[CorpusRecord]) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let io_err = |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = File::create(path).map_err(io_err)?;
    file.write_all(corpus_to_jsonl(records).as_bytes())
        .map_err(io_err)?;
    Ok(())
}

/// JSONL text for a record list (used by `save_corpus` and the CLI).
pub fn corpus_to_jsonl(records: &[CorpusRecord]) -> String {
    let mut out = String::new();
    for record in records {
        // CorpusRecord serialization cannot fail: every field is a plain
        // string, integer, or map of the same.
        out.push_str(&serde_json::to_string(record).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Per-word perturbation probabilities for [`synthesize_corpus`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRates {
    pub substitution: f64,
    pub insertion: f64,
    pub deletion: f64,
}

impl ErrorRates {
    pub fn new(substitution: f64, insertion: f64, deletion: f64) -> Result<Self, CorpusError> {
        let rates = ErrorRates {
            substitution,
            insertion,
            deletion,
        };
        rates.validate()?;
        Ok(rates)
    }

    pub fn zero() -> Self {
        ErrorRates {
            substitution: 0.0,
            insertion: 0.0,
            deletion: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let (sub, ins, del) = (self.substitution, self.insertion, self.deletion);
        let all_finite = sub.is_finite() && ins.is_finite() && del.is_finite();
        if !all_finite || sub < 0.0 || ins < 0.0 || del < 0.0 || sub + ins + del > 1.0 {
            return Err(CorpusError::BadRates { sub, ins, del });
        }
        Ok(())
    }
}

/// Filler vocabulary for injected words: distinctive tokens that rarely
/// collide with real source text, so each injected error costs one edit.
pub(crate) const FILLER_WORDS: &[&str] = &[
    "alfa", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "india", "juliett",
    "kilo", "lima", "mike", "november", "oscar", "papa", "quebec", "romeo", "sierra", "tango",
    "uniform", "victor", "whiskey", "xray", "yankee", "zulu",
];

pub(crate) fn random_filler(rng: &mut impl Rng) -> String {
    FILLER_WORDS[rng.gen_range(0..FILLER_WORDS.len())].to_string()
}

/// A filler word guaranteed to differ from `avoid`.
pub(crate) fn random_filler_except(rng: &mut impl Rng, avoid: &str) -> String {
    loop {
        let word = random_filler(rng);
        if word != avoid {
            return word;
        }
    }
}

/// Build a corpus of (noisy hypothesis, reference) pairs by perturbing each
/// source sentence word by word. Deterministic per seed; each record uses
/// an RNG derived from (seed, record index), so record order and any later
/// parallel processing cannot change the output.
pub fn synthesize_corpus(
    sources: &[String],
    rates: ErrorRates,
    seed: u64,
) -> Result<Vec<CorpusRecord>, CorpusError> {
    rates.validate()?;
    let mut records = Vec::with_capacity(sources.len());
    for (index, source) in sources.iter().enumerate() {
        let mut rng = derive_rng(seed, index as u64);
        let reference = tokenize(source, false);
        let mut asr: Vec<String> = Vec::with_capacity(reference.len());
        for word in reference.words() {
            let draw: f64 = rng.gen();
            if draw < rates.substitution {
                asr.push(random_filler_except(&mut rng, word));
            } else if draw < rates.substitution + rates.deletion {
                // hypothesis drops this reference word
            } else if draw < rates.substitution + rates.deletion + rates.insertion {
                asr.push(word.clone());
                asr.push(random_filler(&mut rng));
            } else {
                asr.push(word.clone());
            }
        }
        records.push(CorpusRecord::new(
            format!("synth-{:06}", index + 1),
            asr.join(" "),
            reference.detokenize(),
        ));
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aligner::align;

    fn tmp_path(name: &str) -> PathBuf {
        let mut path = std::env::temp_dir();
        path.push(format!("ceger-corpus-{}-{name}", std::process::id()));
        path
    }

    #[test]
    fn load_two_valid_lines() {
        let path = tmp_path("two.jsonl");
        std::fs::write(
            &path,
            "{\"id\":\"r1\",\"asr\":\"a b\",\"ref\":\"a c\"}\n\n{\"id\":\"r2\",\"asr\":\"x\",\"ref\":\"x\"}\n",
        )
        .unwrap();
        let records = load_corpus(&path).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].id, "r1");
        assert_eq!(records[1].reference, "x");
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn schema_error_carries_line_number() {
        let path = tmp_path("schema.jsonl");
        std::fs::write(
            &path,
            "{\"id\":\"r1\",\"asr\":\"a\",\"ref\":\"a\"}\n{\"id\":\"r2\",\"asr\":\"b\"}\n",
        )
        .unwrap();
        match load_corpus(&path) {
            Err(CorpusError::Schema { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected schema error, got {other:?}"),
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let path = tmp_path("dup.jsonl");
        std::fs::write(
            &path,
            "{\"id\":\"r1\",\"asr\":\"a\",\"ref\":\"a\"}\n{\"id\":\"r1\",\"asr\":\"b\",\"ref\":\"b\"}\n",
        )
        .unwrap();
        match load_corpus(&path) {
            Err(CorpusError::DuplicateId { line, id }) => {
                assert_eq!(line, 2);
                assert_eq!(id, "r1");
            }
            other => panic!("expected duplicate id error, got {other:?}"),
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_corpus("/nonexistent/definitely/missing.jsonl"),
            Err(CorpusError::Io { .. })
        ));
    }

    #[test]
    fn save_load_roundtrip() {
        let path = tmp_path("roundtrip.jsonl");
        let mut record = CorpusRecord::new("r1", "a b", "a c");
        record.results.insert(
            Method::Ceger,
            MethodResult {
                payload: "[MOVE_FORWARD 1] [REPLACE 1 WITH 'c']".into(),
                token_count: 6,
                output: Some("a c".into()),
                error: None,
            },
        );
        let records = vec![record, CorpusRecord::new("r2", "x", "x")];
        save_corpus(&path, &records).unwrap();
        assert_eq!(load_corpus(&path).unwrap(), records);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn zero_rates_copy_the_reference() {
        let sources = vec!["the cat sat".to_string(), "a dog ran".to_string()];
        let records = synthesize_corpus(&sources, ErrorRates::zero(), 1).unwrap();
        for record in &records {
            assert_eq!(record.asr, record.reference);
        }
        assert_eq!(records[0].id, "synth-000001");
    }

    #[test]
    fn full_substitution_rate_gives_wer_one() {
        let sources = vec!["the cat sat on the mat".to_string()];
        let rates = ErrorRates::new(1.0, 0.0, 0.0).unwrap();
        let records = synthesize_corpus(&sources, rates, 7).unwrap();
        let hyp = tokenize(&records[0].asr, false);
        let reference = tokenize(&records[0].reference, false);
        assert_eq!(crate::aligner::wer(&hyp, &reference).unwrap().wer(), 1.0);
    }

    #[test]
    fn induced_wer_tracks_configured_rates() {
        // ~1800 words at 5% sub + 2.5% ins + 2.5% del: pooled WER within
        // 0.02 of 0.10.
        let sources: Vec<String> = (0..150)
            .map(|i| {
                let words: Vec<String> = (0..12)
                    .map(|j| format!("word{}", (i * 12 + j) % 80))
                    .collect();
                words.join(" ")
            })
            .collect();
        let rates = ErrorRates::new(0.05, 0.025, 0.025).unwrap();
        let records = synthesize_corpus(&sources, rates, 11).unwrap();
        let mut errors = 0usize;
        let mut ref_words = 0usize;
        for record in &records {
            let hyp = tokenize(&record.asr, false);
            let reference = tokenize(&record.reference, false);
            errors += align(&hyp, &reference).error_count();
            ref_words += reference.len();
        }
        assert!(ref_words >= 1000);
        let wer = errors as f64 / ref_words as f64;
        assert!(
            (wer - 0.10).abs() <= 0.02,
            "induced wer {wer} strayed from the configured 0.10"
        );
    }

    #[test]
    fn synthesize_is_deterministic_per_seed() {
        let sources = vec!["one two three four five".to_string(); 5];
        let rates = ErrorRates::new(0.3, 0.1, 0.1).unwrap();
        let a = synthesize_corpus(&sources, rates, 99).unwrap();
        let b = synthesize_corpus(&sources, rates, 99).unwrap();
        assert_eq!(a, b);
        let c = synthesize_corpus(&sources, rates, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn bad_rates_are_rejected() {
        assert!(matches!(
            ErrorRates::new(0.8, 0.3, 0.0),
            Err(CorpusError::BadRates { .. })
        ));
        assert!(matches!(
            ErrorRates::new(-0.1, 0.0, 0.0),
            Err(CorpusError::BadRates { .. })
        ));
    }
}
