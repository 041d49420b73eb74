//! Retrieve and classify documents on predefined topics from an unlabeled
//! corpus, using nothing but a handful of descriptive keywords per topic.
//!
//! The pipeline learns jointly embedded word and document vectors from the
//! corpus (PV-DBOW interleaved with Skip-gram, shared negative-sampling
//! output layer), places each topic in that feature space by averaging the
//! outlier-cleaned documents nearest to its keyword centroid, and then
//! scores every document against those label vectors by cosine similarity.
//!
//! The stages map onto the modules:
//!
//! - [`corpus`] — ingestion, tokenization, vocabulary and noise distribution
//! - [`embedding`] — joint PV-DBOW / Skip-gram training, model persistence
//! - [`lof`] — local outlier factor scoring used to clean candidate sets
//! - [`labeling`] — keyword centroid → candidate documents → label vector
//! - [`retrieval`] — per-topic retrieval and multiclass classification
//! - [`evaluation`] — micro P/R/F1, ROC/AUC, keyword similarity statistics
//!
//! See the `lbl2vec` binary for the file-level workflow.

pub mod corpus;
pub mod embedding;
mod error;
pub mod evaluation;
pub mod labeling;
pub mod lof;
pub mod retrieval;
#[cfg(test)]
pub(crate) mod test_support;

pub use corpus::{build_vocabulary, ingest_jsonl, tokenize, Corpus, Document, Vocabulary};
pub use embedding::{cosine_similarity, train, EmbeddingModel, TrainConfig};
pub use error::{Error, Result};
pub use evaluation::{
    analyze_keywords, intertopic_similarity, intratopic_similarity, kendall_tau, micro_average_roc,
    micro_prf, p_value_from_tau, roc_auc, CorrelationResult, EvaluationSummary, KeywordAnalysis,
    MicroPrf, RocCurve,
};
pub use labeling::{
    centroid, compute_label_embedding, keyword_centroid, select_candidates, CandidateSet,
    LabelEmbedding, LabelParams, TopicSpec,
};
pub use lof::{filter_outliers, lof_scores, LofParams};
pub use retrieval::{classify, retrieve, score_document, AlphaConfig, Prediction};

/// Index of a document within its corpus: dense, 0-based, assigned at ingestion.
pub type DocId = usize;
