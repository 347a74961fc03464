//! Corpus orchestration: align, compile, serialize, re-parse, expand.
//!
//! Generated commands always travel through their textual form before
//! expansion; there is no in-memory shortcut, so the grammar is load-bearing
//! on every run. Records are independent and may be processed in parallel;
//! per-record RNG seeding keeps the output identical either way.

use rayon::prelude::*;

use crate::aligner::align;
use crate::baselines::{
    compile_representation, expand_representation, payload_token_count, Method,
};
use crate::corpus::{CorpusRecord, MethodResult};
use crate::engine::{self, ExpandMode};
use crate::grammar;
use crate::noise::NoiseConfig;
use crate::tokens::tokenize;

/// Where command sequences come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    /// Compile commands straight from the oracle alignment.
    Oracle,
    /// Oracle commands passed through seeded perturbation.
    Noisy(NoiseConfig),
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub methods: Vec<Method>,
    pub generator: Generator,
    pub mode: ExpandMode,
    pub lowercase: bool,
    pub parallel: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            methods: Method::ALL.to_vec(),
            generator: Generator::Oracle,
            mode: ExpandMode::Lenient,
            lowercase: false,
            parallel: false,
        }
    }
}

/// Run the full per-record pipeline and return annotated clones. Failures
/// never abort the corpus; they land in each record's `error` field.
pub fn run_pipeline(records: &[CorpusRecord], config: &PipelineConfig) -> Vec<CorpusRecord> {
    map_records(records, config, true)
}

/// Compile and attach payloads without expanding them.
pub fn compile_payloads(records: &[CorpusRecord], config: &PipelineConfig) -> Vec<CorpusRecord> {
    map_records(records, config, false)
}

fn map_records(
    records: &[CorpusRecord],
    config: &PipelineConfig,
    expand: bool,
) -> Vec<CorpusRecord> {
    let process = |(index, record): (usize, &CorpusRecord)| {
        process_record(record, index as u64, config, expand)
    };
    if config.parallel {
        records.par_iter().enumerate().map(process).collect()
    } else {
        records.iter().enumerate().map(process).collect()
    }
}

fn process_record(
    record: &CorpusRecord,
    index: u64,
    config: &PipelineConfig,
    expand: bool,
) -> CorpusRecord {
    let hyp = tokenize(&record.asr, config.lowercase);
    let reference = tokenize(&record.reference, config.lowercase);
    let alignment = align(&hyp, &reference);
    let mut annotated = record.clone();

    for &method in &config.methods {
        let payload = match (method, &config.generator) {
            (Method::Ceger, Generator::Noisy(noise)) => {
                let commands = noise.perturb(&engine::compile(&alignment), index);
                grammar::serialize(&commands)
            }
            _ => compile_representation(method, &alignment).payload,
        };
        let mut result = MethodResult {
            token_count: payload_token_count(&payload),
            payload,
            output: None,
            error: None,
        };
        if expand {
            match expand_representation(method, &hyp, &result.payload, config.mode) {
                Ok(tokens) => result.output = Some(tokens.detokenize()),
                Err(err) => result.error = Some(err.to_string()),
            }
        }
        annotated.results.insert(method, result);
    }
    annotated
}

/// Re-expand payloads already stored on the records. Records without a
/// payload for `method` are passed through untouched.
pub fn expand_stored(
    records: &[CorpusRecord],
    method: Method,
    mode: ExpandMode,
    lowercase: bool,
) -> Vec<CorpusRecord> {
    records
        .iter()
        .map(|record| {
            let mut annotated = record.clone();
            let hyp = tokenize(&annotated.asr, lowercase);
            if let Some(result) = annotated.results.get_mut(&method) {
                match expand_representation(method, &hyp, &result.payload, mode) {
                    Ok(tokens) => {
                        result.output = Some(tokens.detokenize());
                        result.error = None;
                    }
                    Err(err) => {
                        result.output = None;
                        result.error = Some(err.to_string());
                    }
                }
            }
            annotated
        })
        .collect()
}
