//! `ceger`: corpus-level harness for the edit-representation toolkit.
//!
//! Subcommands cover the whole loop: `align` scores raw hypotheses,
//! `compile` attaches per-method payloads, `expand` replays stored payloads,
//! `score` reports on stored results, `synthesize` builds a noisy corpus
//! from reference sentences, and `report` runs the full pipeline in one go.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. All configuration is
//! via flags so runs are reproducible; stdout output is deterministic for a
//! fixed seed and input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand};

use ceger_core::{
    align, asr_wer, build_report, compile_payloads, corpus_to_jsonl, emit_report, expand_stored,
    load_corpus, run_pipeline, save_corpus, synthesize_corpus, tokenize, ErrorRates, ExpandMode,
    Generator, Method, NoiseConfig, PipelineConfig, ReportFormat,
};

#[derive(Parser)]
#[command(
    name = "ceger",
    version,
    about = "Word-level edit-representation toolkit for ASR post-editing"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Score each record's raw hypothesis against its reference
    Align(AlignArgs),
    /// Compile per-method payloads and attach them to the corpus
    Compile(CompileArgs),
    /// Expand stored payloads over each hypothesis
    Expand(ExpandArgs),
    /// Report on results already stored in the corpus
    Score(ScoreArgs),
    /// Build a synthetic corpus by perturbing reference sentences
    Synthesize(SynthesizeArgs),
    /// Run the full pipeline (compile, reparse, expand, score) and report
    Report(ReportArgs),
}

#[derive(Args)]
struct AlignArgs {
    /// JSONL corpus with id/asr/ref records
    #[arg(long)]
    input: PathBuf,
    /// Lowercase both sides before scoring
    #[arg(long)]
    lowercase: bool,
    /// Output format: table or json
    #[arg(long, default_value = "table")]
    format: String,
    /// Write here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    input: PathBuf,
    /// Method to compile: ceger, full, span, phrase, target, or all
    #[arg(long, default_value = "all")]
    method: String,
    #[arg(long)]
    lowercase: bool,
    /// Per-command perturbation probability for the ceger payloads
    #[arg(long, default_value_t = 0.0)]
    noise_rate: f64,
    /// Seed for the noisy generator
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the annotated JSONL here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExpandArgs {
    /// JSONL corpus that already carries payloads (see `compile`)
    #[arg(long)]
    input: PathBuf,
    /// A single method: ceger, full, span, phrase, or target
    #[arg(long, default_value = "ceger")]
    method: String,
    /// strict rejects unconsumed hypothesis words; lenient carries them over
    #[arg(long, default_value = "lenient")]
    mode: String,
    #[arg(long)]
    lowercase: bool,
    /// Write annotated JSONL here; without it the expanded text prints
    /// one line per record (falling back to the raw ASR on failure)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    input: PathBuf,
    /// Methods to report: a single method or all
    #[arg(long, default_value = "all")]
    method: String,
    #[arg(long)]
    lowercase: bool,
    #[arg(long, default_value = "table")]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SynthesizeArgs {
    /// Text file with one reference sentence per line
    #[arg(long)]
    input: PathBuf,
    /// Where to write the JSONL corpus
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    sub_rate: f64,
    #[arg(long, default_value_t = 0.025)]
    ins_rate: f64,
    #[arg(long, default_value_t = 0.025)]
    del_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "all")]
    method: String,
    #[arg(long, default_value = "lenient")]
    mode: String,
    #[arg(long)]
    lowercase: bool,
    /// Per-command perturbation probability for the ceger generator
    #[arg(long, default_value_t = 0.0)]
    noise_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "table")]
    format: String,
    /// Process records with rayon; output is identical either way
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(message) | CliError::Data(message) => message,
        }
    }
}

fn data_err(err: impl std::fmt::Display) -> CliError {
    CliError::Data(err.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion
            ) =>
        {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Align(args) => cmd_align(args),
        Cmd::Compile(args) => cmd_compile(args),
        Cmd::Expand(args) => cmd_expand(args),
        Cmd::Score(args) => cmd_score(args),
        Cmd::Synthesize(args) => cmd_synthesize(args),
        Cmd::Report(args) => cmd_report(args),
    }
}

fn parse_methods(spec: &str) -> Result<Vec<Method>, CliError> {
    if spec == "all" {
        return Ok(Method::ALL.to_vec());
    }
    spec.parse::<Method>()
        .map(|method| vec![method])
        .map_err(CliError::Usage)
}

fn parse_single_method(spec: &str) -> Result<Method, CliError> {
    spec.parse::<Method>().map_err(CliError::Usage)
}

fn parse_mode(spec: &str) -> Result<ExpandMode, CliError> {
    match spec {
        "strict" => Ok(ExpandMode::Strict),
        "lenient" => Ok(ExpandMode::Lenient),
        other => Err(CliError::Usage(format!(
            "unknown mode '{other}' (expected strict or lenient)"
        ))),
    }
}

fn parse_format(spec: &str) -> Result<ReportFormat, CliError> {
    spec.parse::<ReportFormat>().map_err(CliError::Usage)
}

fn corpus_name(path: &Path) -> String {
    path.file_stem()
        .map(|stem| stem.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string())
}

fn write_output(target: Option<&Path>, content: &str) -> Result<(), CliError> {
    match target {
        Some(path) => fs::write(path, content)
            .map_err(|err| CliError::Data(format!("{}: {err}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_align(args: AlignArgs) -> Result<(), CliError> {
    let format = parse_format(&args.format)?;
    let records = load_corpus(&args.input).map_err(data_err)?;
    if records.is_empty() {
        return Err(CliError::Data("corpus is empty".to_string()));
    }

    let mut rows = Vec::with_capacity(records.len());
    let mut total_errors = 0usize;
    let mut total_ref = 0usize;
    for record in &records {
        let hyp = tokenize(&record.asr, args.lowercase);
        let reference = tokenize(&record.reference, args.lowercase);
        let breakdown = align(&hyp, &reference).breakdown();
        total_errors += breakdown.errors();
        total_ref += breakdown.ref_len;
        rows.push((record.id.clone(), breakdown));
    }
    let pooled = asr_wer(&records, args.lowercase).map_err(data_err)?;

    let content = match format {
        ReportFormat::Table => {
            let mut out = String::new();
            for (id, b) in &rows {
                let _ = writeln!(
                    out,
                    "{id}\tsub={} del={} ins={} ref={} wer={:.4}",
                    b.substitutions,
                    b.deletions,
                    b.insertions,
                    b.ref_len,
                    b.wer()
                );
            }
            let _ = writeln!(
                out,
                "total\terrors={total_errors} ref={total_ref} wer={pooled:.4}"
            );
            out
        }
        ReportFormat::Json => {
            let records_json: Vec<serde_json::Value> = rows
                .iter()
                .map(|(id, b)| {
                    serde_json::json!({
                        "id": id,
                        "substitutions": b.substitutions,
                        "deletions": b.deletions,
                        "insertions": b.insertions,
                        "ref_len": b.ref_len,
                        "wer": b.wer(),
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "records": records_json,
                "total": { "errors": total_errors, "ref_len": total_ref, "wer": pooled },
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("json");
            text.push('\n');
            text
        }
    };
    write_output(args.output.as_deref(), &content)
}

fn build_generator(noise_rate: f64, seed: u64) -> Result<Generator, CliError> {
    if noise_rate == 0.0 {
        Ok(Generator::Oracle)
    } else {
        NoiseConfig::new(seed, noise_rate)
            .map(Generator::Noisy)
            .map_err(|err| CliError::Usage(err.to_string()))
    }
}

fn cmd_compile(args: CompileArgs) -> Result<(), CliError> {
    let methods = parse_methods(&args.method)?;
    let generator = build_generator(args.noise_rate, args.seed)?;
    let records = load_corpus(&args.input).map_err(data_err)?;
    let config = PipelineConfig {
        methods,
        generator,
        lowercase: args.lowercase,
        ..PipelineConfig::default()
    };
    let annotated = compile_payloads(&records, &config);
    match &args.output {
        Some(path) => save_corpus(path, &annotated).map_err(data_err),
        None => {
            print!("{}", corpus_to_jsonl(&annotated));
            Ok(())
        }
    }
}

fn cmd_expand(args: ExpandArgs) -> Result<(), CliError> {
    let method = parse_single_method(&args.method)?;
    let mode = parse_mode(&args.mode)?;
    let records = load_corpus(&args.input).map_err(data_err)?;
    let expanded = expand_stored(&records, method, mode, args.lowercase);

    if let Some(path) = &args.output {
        return save_corpus(path, &expanded).map_err(data_err);
    }
    // One line of corrected text per record; failures fall back to the raw
    // ASR text and explain themselves on stderr.
    let mut out = String::new();
    for record in &expanded {
        match record.results.get(&method) {
            Some(result) => match (&result.output, &result.error) {
                (Some(text), _) => {
                    let _ = writeln!(out, "{text}");
                }
                (None, error) => {
                    eprintln!(
                        "warning: record {}: {}",
                        record.id,
                        error.as_deref().unwrap_or("expansion failed")
                    );
                    let _ = writeln!(out, "{}", record.asr);
                }
            },
            None => {
                eprintln!(
                    "warning: record {}: no stored payload for {method}",
                    record.id
                );
                let _ = writeln!(out, "{}", record.asr);
            }
        }
    }
    print!("{out}");
    Ok(())
}

fn cmd_score(args: ScoreArgs) -> Result<(), CliError> {
    let format = parse_format(&args.format)?;
    let requested = parse_methods(&args.method)?;
    let records = load_corpus(&args.input).map_err(data_err)?;

    // Only methods that actually appear in the corpus make a meaningful row.
    let methods: Vec<Method> = requested
        .into_iter()
        .filter(|method| records.iter().any(|r| r.results.contains_key(method)))
        .collect();
    if methods.is_empty() {
        return Err(CliError::Data(
            "no stored results for the requested methods; run `compile` and `expand`, or `report`"
                .to_string(),
        ));
    }

    let report = build_report(
        &corpus_name(&args.input),
        &records,
        &methods,
        args.lowercase,
    )
    .map_err(data_err)?;
    write_output(args.output.as_deref(), &emit_report(&report, format))
}

fn cmd_synthesize(args: SynthesizeArgs) -> Result<(), CliError> {
    let rates = ErrorRates::new(args.sub_rate, args.ins_rate, args.del_rate)
        .map_err(|err| CliError::Usage(err.to_string()))?;
    let text = fs::read_to_string(&args.input)
        .map_err(|err| CliError::Data(format!("{}: {err}", args.input.display())))?;
    let sources: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|line| !line.is_empty())
        .map(String::from)
        .collect();
    if sources.is_empty() {
        return Err(CliError::Data(format!(
            "{}: no source sentences found",
            args.input.display()
        )));
    }
    let records = synthesize_corpus(&sources, rates, args.seed).map_err(data_err)?;
    save_corpus(&args.output, &records).map_err(data_err)?;
    eprintln!(
        "wrote {} records to {}",
        records.len(),
        args.output.display()
    );
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<(), CliError> {
    let methods = parse_methods(&args.method)?;
    let mode = parse_mode(&args.mode)?;
    let format = parse_format(&args.format)?;
    let generator = build_generator(args.noise_rate, args.seed)?;
    let records = load_corpus(&args.input).map_err(data_err)?;

    let config = PipelineConfig {
        methods: methods.clone(),
        generator,
        mode,
        lowercase: args.lowercase,
        parallel: args.parallel,
    };
    let annotated = run_pipeline(&records, &config);
    let report = build_report(
        &corpus_name(&args.input),
        &annotated,
        &methods,
        args.lowercase,
    )
    .map_err(data_err)?;

    write_output(args.output.as_deref(), &emit_report(&report, format))
}
