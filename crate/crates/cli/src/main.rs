//! Command-line pipeline around the lbl2vec library.
//!
//! Subcommands mirror the workflow: `train` a joint embedding model from a
//! JSONL corpus, derive `labels` from topic keywords, `retrieve` or
//! `classify` documents against those labels, `evaluate` predictions
//! against gold labels, and `analyze-keywords` for the keyword-quality
//! statistics.
//!
//! Exit codes: 0 success, 2 usage/validation errors, 3 data errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Parser)]
#[command(name = "lbl2vec", version, about = "Retrieve and classify documents on predefined topics, unsupervised")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train jointly embedded word and document vectors from a JSONL corpus.
    Train(TrainArgs),
    /// Compute one label embedding per topic from a keywords file.
    Labels(LabelsArgs),
    /// List documents similar to one topic, sorted by similarity.
    Retrieve(RetrieveArgs),
    /// Assign every document its most similar topic, with a reject option.
    Classify(ClassifyArgs),
    /// Score predictions against gold labels: micro P/R/F1 and ROC/AUC.
    Evaluate(EvaluateArgs),
    /// Keyword similarity statistics and their rank correlation with AUC.
    AnalyzeKeywords(AnalyzeKeywordsArgs),
}

#[derive(Args)]
struct TrainArgs {
    /// JSONL corpus: one {"text": ..., "label": ...} object per line.
    #[arg(long)]
    corpus: PathBuf,
    /// Output model file.
    #[arg(long)]
    out: PathBuf,
    /// Vector dimensionality.
    #[arg(long, default_value_t = 300)]
    dim: usize,
    /// Training epochs (one DBOW + one Skip-gram pass per document each).
    #[arg(long, default_value_t = 10)]
    epochs: usize,
    /// Skip-gram context radius.
    #[arg(long, default_value_t = 5)]
    window: usize,
    /// Negative samples per target.
    #[arg(long, default_value_t = 5)]
    negatives: usize,
    /// Initial learning rate (decays linearly to --min-lr).
    #[arg(long, default_value_t = 0.025)]
    lr: f32,
    #[arg(long, default_value_t = 1e-4)]
    min_lr: f32,
    /// Discard words occurring fewer than this many times.
    #[arg(long, default_value_t = 5)]
    min_count: u32,
    /// Frequent-word subsampling threshold (0 disables).
    #[arg(long, default_value_t = 1e-3)]
    subsample: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads; results are bitwise reproducible only with 1.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct LabelsArgs {
    /// Model file written by `train`.
    #[arg(long)]
    model: PathBuf,
    /// JSON array of {"topic": ..., "keywords": [...]}.
    #[arg(long)]
    keywords: PathBuf,
    /// Output labels file (JSON).
    #[arg(long)]
    out: PathBuf,
    /// Candidate similarity threshold in [-1, 1].
    #[arg(long, default_value_t = 0.43)]
    s: f64,
    /// Minimum candidate documents per topic, taken even below the threshold.
    #[arg(long, default_value_t = 100)]
    dmin: usize,
    /// Maximum candidate documents per topic; 0 means all documents.
    #[arg(long, default_value_t = 0)]
    dmax: usize,
    /// Neighborhood size for outlier cleaning.
    #[arg(long, default_value_t = 20)]
    lof_k: usize,
    /// Candidates with LOF above this are dropped.
    #[arg(long, default_value_t = 1.5)]
    lof_threshold: f64,
}

#[derive(Args)]
struct RetrieveArgs {
    #[arg(long)]
    model: PathBuf,
    /// Labels file written by `labels`.
    #[arg(long)]
    labels: PathBuf,
    /// Topic to retrieve for.
    #[arg(long)]
    topic: String,
    /// Only documents with similarity strictly above this are returned.
    #[arg(long, default_value_t = -1.0)]
    alpha: f64,
    /// Output JSONL: {"doc_id": ..., "similarity": ...} per hit.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    /// Acceptance threshold applied to every topic unless overridden.
    #[arg(long, default_value_t = -1.0)]
    alpha: f64,
    /// Optional JSON map of per-topic alpha overrides.
    #[arg(long)]
    alphas: Option<PathBuf>,
    /// Output predictions JSONL.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Corpus with gold labels (JSONL `label` field).
    #[arg(long)]
    corpus: PathBuf,
    /// Predictions JSONL written by `classify`.
    #[arg(long)]
    predictions: PathBuf,
    /// Where to write the ROC curves as CSV (topic,threshold,fpr,tpr).
    #[arg(long)]
    roc_csv: Option<PathBuf>,
    /// Where to write the summary JSON (micro P/R/F1 and AUC values).
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeKeywordsArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    keywords: PathBuf,
    /// Summary JSON written by `evaluate` (source of per-topic AUC values).
    #[arg(long)]
    auc: PathBuf,
    /// Output report JSON.
    #[arg(long)]
    out: PathBuf,
}

/// An error with the exit code it should terminate with.
pub(crate) struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub(crate) fn usage(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<lbl2vec::Error> for CliError {
    fn from(e: lbl2vec::Error) -> CliError {
        use lbl2vec::Error::*;
        let code = match e {
            Io { .. }
            | InvalidParameter(_)
            | DocIdOutOfRange { .. }
            | DimensionMismatch { .. }
            | LengthMismatch { .. }
            | TooFewPoints(_)
            | TooFewObservations(_)
            | EmptyCentroid
            | NoOtherTopics => EXIT_USAGE,
            MalformedLine { .. }
            | MissingText { .. }
            | TextNotString { .. }
            | EmptyCorpus
            | EmptyVocabulary { .. }
            | OutOfVocabulary(_)
            | UnrecognizedModelFile
            | UnexpectedEof
            | CorruptModelFile(_)
            | AllKeywordsOov { .. }
            | TooFewKeywords { .. }
            | DuplicateTopic(_)
            | TopicNotFound(_)
            | SingleClass
            | ConstantInput
            | MissingGoldLabel(_) => EXIT_DATA,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub(crate) type CliResult = Result<(), CliError>;

/// Inputs must exist up front so a typo fails fast instead of after a long
/// training run.
pub(crate) fn require_input(path: &std::path::Path) -> CliResult {
    if !path.exists() {
        return Err(CliError::usage(format!(
            "file not found: {}",
            path.display()
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(args) => commands::train(args),
        Command::Labels(args) => commands::labels(args),
        Command::Retrieve(args) => commands::retrieve(args),
        Command::Classify(args) => commands::classify(args),
        Command::Evaluate(args) => commands::evaluate(args),
        Command::AnalyzeKeywords(args) => commands::analyze_keywords(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
