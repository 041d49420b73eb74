//! Helpers shared by unit tests across modules.

use crate::corpus::Vocabulary;
use crate::embedding::{EmbeddingModel, Matrix};

/// Builds a model directly from word and document vectors, bypassing
/// training, for tests that need exact geometry.
pub(crate) fn model_with(words: &[(&str, Vec<f32>)], docs: Vec<Vec<f32>>) -> EmbeddingModel {
    let dim = words
        .first()
        .map(|(_, v)| v.len())
        .or_else(|| docs.first().map(Vec::len))
        .unwrap();
    let entries: Vec<(String, u64)> = words.iter().map(|(w, _)| (w.to_string(), 1)).collect();
    let vocabulary = Vocabulary::from_entries(entries, 1, 0.0).unwrap();
    let word_data: Vec<f32> = words.iter().flat_map(|(_, v)| v.clone()).collect();
    let word = Matrix::from_vec(words.len(), dim, word_data);
    let n_docs = docs.len();
    let doc = Matrix::from_vec(n_docs, dim, docs.into_iter().flatten().collect());
    let output = Matrix::zeros(words.len(), dim);
    EmbeddingModel::from_parts(vocabulary, word, doc, output).unwrap()
}
