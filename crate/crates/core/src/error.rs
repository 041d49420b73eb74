use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the lbl2vec pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON at line {line}: {message}")]
    MalformedLine { line: usize, message: String },

    #[error("missing field text at line {line}")]
    MissingText { line: usize },

    #[error("field text must be a string at line {line}")]
    TextNotString { line: usize },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("empty vocabulary: no word occurs at least {min_count} times")]
    EmptyVocabulary { min_count: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("out-of-vocabulary word: {0:?}")]
    OutOfVocabulary(String),

    #[error("document id {doc_id} out of range (corpus has {n_docs} documents)")]
    DocIdOutOfRange { doc_id: usize, n_docs: usize },

    #[error("unrecognized model file")]
    UnrecognizedModelFile,

    #[error("unexpected end of file")]
    UnexpectedEof,

    #[error("model file is corrupt: {0}")]
    CorruptModelFile(String),

    #[error("need at least 2 points for outlier scoring, got {0}")]
    TooFewPoints(usize),

    #[error("cannot take the centroid of an empty set")]
    EmptyCentroid,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("topic {topic:?}: all keywords are out of vocabulary: {keywords:?}")]
    AllKeywordsOov {
        topic: String,
        keywords: Vec<String>,
    },

    #[error("topic {topic:?} needs at least 2 in-vocabulary keywords, got {got}")]
    TooFewKeywords { topic: String, got: usize },

    #[error("intertopic similarity needs at least one other topic")]
    NoOtherTopics,

    #[error("duplicate topic name: {0:?}")]
    DuplicateTopic(String),

    #[error("topic not found: {0:?}")]
    TopicNotFound(String),

    #[error("ROC needs both a positive and a negative example")]
    SingleClass,

    #[error("length mismatch: {x} vs {y} observations")]
    LengthMismatch { x: usize, y: usize },

    #[error("rank correlation needs at least 3 observations, got {0}")]
    TooFewObservations(usize),

    #[error("rank correlation is undefined for constant input")]
    ConstantInput,

    #[error("document {0} has no gold label")]
    MissingGoldLabel(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
