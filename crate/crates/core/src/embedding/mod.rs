//! Jointly embedded word and document vectors.
//!
//! Training interleaves one PV-DBOW pass (the document vector predicts each
//! of its tokens) with one Skip-gram pass (each token predicts its window
//! neighbors) per document, both against a shared negative-sampling output
//! matrix, so word and document vectors land in the same feature space and
//! cosine similarity between them is meaningful.

mod matrix;
mod model_io;
mod negative_sampling;
mod train;

pub use matrix::Matrix;
pub use model_io::{load, save};
pub use negative_sampling::{negative_sampling_loss, negative_sampling_update};
pub use train::{train, train_with_summary, TrainSummary};

use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::DocId;

/// Hyperparameters for joint PV-DBOW / Skip-gram training.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    /// Vector dimensionality.
    pub dim: usize,
    /// Epochs; each epoch runs one DBOW and one Skip-gram pass per document.
    pub epochs: usize,
    /// Skip-gram context radius.
    pub window: usize,
    /// Noise samples per target.
    pub negatives: usize,
    pub initial_lr: f32,
    pub min_lr: f32,
    pub seed: u64,
    /// Worker threads; bitwise reproducibility is guaranteed only with 1.
    pub workers: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 300,
            epochs: 10,
            window: 5,
            negatives: 5,
            initial_lr: 0.025,
            min_lr: 1e-4,
            seed: 1,
            workers: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::InvalidParameter("dim must be >= 1".into()));
        }
        if self.epochs < 1 {
            return Err(Error::InvalidParameter("epochs must be >= 1".into()));
        }
        if self.window < 1 {
            return Err(Error::InvalidParameter("window must be >= 1".into()));
        }
        if self.negatives < 1 {
            return Err(Error::InvalidParameter("negatives must be >= 1".into()));
        }
        if !(self.min_lr > 0.0 && self.min_lr <= self.initial_lr) {
            return Err(Error::InvalidParameter(
                "learning rates must satisfy 0 < min_lr <= initial_lr".into(),
            ));
        }
        if self.workers < 1 {
            return Err(Error::InvalidParameter("workers must be >= 1".into()));
        }
        Ok(())
    }
}

/// Trained word vectors, document vectors, and the shared output matrix,
/// all of one dimensionality and one feature space.
#[derive(Debug, Clone)]
pub struct EmbeddingModel {
    vocabulary: Vocabulary,
    dim: usize,
    word_vectors: Matrix<f32>,
    doc_vectors: Matrix<f32>,
    output_vectors: Matrix<f32>,
}

impl EmbeddingModel {
    /// Assembles a model from pre-existing matrices. Row counts must match
    /// the vocabulary (word and output matrices) and all dimensionalities
    /// must agree.
    pub fn from_parts(
        vocabulary: Vocabulary,
        word_vectors: Matrix<f32>,
        doc_vectors: Matrix<f32>,
        output_vectors: Matrix<f32>,
    ) -> Result<EmbeddingModel> {
        let dim = word_vectors.cols();
        if doc_vectors.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: doc_vectors.cols(),
            });
        }
        if output_vectors.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: output_vectors.cols(),
            });
        }
        if word_vectors.rows() != vocabulary.len() || output_vectors.rows() != vocabulary.len() {
            return Err(Error::InvalidParameter(format!(
                "word/output matrices must have one row per vocabulary word ({})",
                vocabulary.len()
            )));
        }
        Ok(EmbeddingModel {
            vocabulary,
            dim,
            word_vectors,
            doc_vectors,
            output_vectors,
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_docs(&self) -> usize {
        self.doc_vectors.rows()
    }

    /// Trained input vector of a word.
    pub fn word_vector(&self, word: &str) -> Result<&[f32]> {
        let index = self
            .vocabulary
            .index_of(word)
            .ok_or_else(|| Error::OutOfVocabulary(word.to_string()))?;
        Ok(self.word_vectors.row(index))
    }

    /// Trained input vector of a document.
    pub fn doc_vector(&self, doc_id: DocId) -> Result<&[f32]> {
        if doc_id >= self.doc_vectors.rows() {
            return Err(Error::DocIdOutOfRange {
                doc_id,
                n_docs: self.doc_vectors.rows(),
            });
        }
        Ok(self.doc_vectors.row(doc_id))
    }

    pub fn word_vectors(&self) -> &Matrix<f32> {
        &self.word_vectors
    }

    pub fn doc_vectors(&self) -> &Matrix<f32> {
        &self.doc_vectors
    }

    pub fn output_vectors(&self) -> &Matrix<f32> {
        &self.output_vectors
    }

    /// Cosine of a document vector against an `f64` query vector.
    pub fn doc_similarity(&self, doc_id: DocId, query: &[f64]) -> Result<f64> {
        Ok(cosine_mixed(self.doc_vector(doc_id)?, query))
    }

    /// True once any trained vector went non-finite; checked after training.
    pub(crate) fn has_non_finite(&self) -> bool {
        self.word_vectors.has_non_finite()
            || self.doc_vectors.has_non_finite()
            || self.output_vectors.has_non_finite()
    }

    /// Equality over everything the model file persists: vocabulary words
    /// and counts, dimensionality, and bit-identical matrices. Training-only
    /// vocabulary settings (min_count, subsampling threshold) are not stored
    /// in model files and are excluded.
    pub fn persisted_eq(&self, other: &EmbeddingModel) -> bool {
        self.dim == other.dim
            && self.vocabulary.len() == other.vocabulary.len()
            && self
                .vocabulary
                .word_count_pairs()
                .eq(other.vocabulary.word_count_pairs())
            && self.word_vectors.bits_eq(&other.word_vectors)
            && self.doc_vectors.bits_eq(&other.doc_vectors)
            && self.output_vectors.bits_eq(&other.output_vectors)
    }
}

/// Cosine similarity clamped to [-1, 1]; zero-norm inputs yield 0 by
/// convention so untouched vectors compare as unrelated rather than failing.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0)
}

/// Cosine between an `f32` vector (model storage) and an `f64` query,
/// accumulated in `f64`. Same conventions as [`cosine_similarity`].
pub(crate) fn cosine_mixed(a: &[f32], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        let x = f64::from(*x);
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0)
}

/// Widens an `f32` model vector to `f64`.
pub fn widen(v: &[f32]) -> Vec<f64> {
    v.iter().map(|&x| f64::from(x)).collect()
}
