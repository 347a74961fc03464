//! Word-level edit-representation toolkit for ASR post-editing experiments.
//!
//! The toolkit covers the whole loop: align a (hypothesis, reference) word
//! pair, compile the alignment into a compact edit-command sequence,
//! serialize and re-parse the commands, expand them deterministically over
//! the hypothesis, and score the result. Alongside the command grammar it
//! ships four baseline representations (full rewrite, span, phrase pair,
//! target only) behind the same compile/expand surface, a seeded noisy
//! generator standing in for an imperfect command generator, and corpus
//! level WER / output-length reporting.
//!
//! ```
//! use ceger_core::{align, compile, expand, parse, serialize, tokenize, ExpandMode};
//!
//! let hyp = tokenize("I went to the store and bought apples.", false);
//! let reference = tokenize("I went to the market and bought red apples.", false);
//!
//! let commands = compile(&align(&hyp, &reference));
//! let wire = serialize(&commands);
//! assert_eq!(
//!     wire,
//!     "[MOVE_FORWARD 4] [REPLACE 1 WITH 'market'] [MOVE_FORWARD 2] \
//!      [INSERT 'red'] [MOVE_FORWARD 1]"
//! );
//!
//! let expanded = expand(&hyp, &parse(&wire).unwrap(), ExpandMode::Strict).unwrap();
//! assert_eq!(expanded, reference);
//! ```

pub mod aligner;
pub mod baselines;
pub mod corpus;
pub mod edits;
pub mod engine;
pub mod grammar;
pub mod noise;
pub mod pipeline;
pub mod report;
pub mod tokens;

pub use aligner::{
    align, edit_distance, wer, Alignment, AlignmentError, EmptyReferenceError, WerBreakdown,
};
pub use baselines::{
    compile_full_rewrite, compile_phrase_pair, compile_representation, compile_span,
    compile_target_only, expand_full_rewrite, expand_phrase_pair, expand_representation,
    expand_span, expand_target_only, BaselineError, Method, Representation, RepresentationError,
};
pub use corpus::{
    corpus_to_jsonl, load_corpus, save_corpus, synthesize_corpus, CorpusError, CorpusRecord,
    ErrorRates, MethodResult,
};
pub use edits::{Command, CommandError, CommandKind, EditKind, EditOp};
pub use engine::{command_stats, compile, expand, CommandStats, ExpandMode, ExpansionError};
pub use grammar::{parse, serialize, ParseError, ParseErrorKind};
pub use noise::{InvalidNoiseRate, NoiseConfig, PerturbationSet};
pub use pipeline::{compile_payloads, expand_stored, run_pipeline, Generator, PipelineConfig};
pub use report::{
    asr_wer, build_report, distribution, emit_report, summarize, DistributionSummary,
    MethodSummary, Report, ReportError, ReportFormat,
};
pub use tokens::{detokenize, tokenize, TokenError, TokenSeq};
