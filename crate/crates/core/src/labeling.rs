//! From topic keywords to label embeddings.
//!
//! For each topic: average the in-vocabulary keyword vectors into a keyword
//! centroid, rank every document by cosine against that centroid, admit the
//! top documents under the (s, d_min, d_max) rule, drop local-density
//! outliers among them, and average what remains into the topic's label
//! vector. Candidate documents carry the topic's meaning better than the
//! keywords themselves; outlier cleaning removes documents that match some
//! keywords but not the intended topic.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embedding::{cosine_mixed, widen, EmbeddingModel};
use crate::error::{Error, Result};
use crate::lof::{filter_outliers, LofParams};
use crate::DocId;

/// A named topic and the human-defined keywords describing it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopicSpec {
    #[serde(rename = "topic")]
    pub name: String,
    pub keywords: Vec<String>,
}

impl TopicSpec {
    pub fn new(name: impl Into<String>, keywords: &[&str]) -> TopicSpec {
        TopicSpec {
            name: name.into(),
            keywords: keywords.iter().map(|k| k.to_lowercase()).collect(),
        }
    }
}

/// Reads a topics file: a JSON array of `{"topic": ..., "keywords": [...]}`
/// objects. Keywords are lowercased; names must be unique and keyword lists
/// non-empty.
pub fn load_topics(path: impl AsRef<Path>) -> Result<Vec<TopicSpec>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut topics: Vec<TopicSpec> = serde_json::from_reader(BufReader::new(file))
        .map_err(|e| Error::InvalidParameter(format!("topics file {}: {e}", path.display())))?;
    let mut seen = HashSet::new();
    for topic in &mut topics {
        if topic.keywords.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "topic {:?} has no keywords",
                topic.name
            )));
        }
        if !seen.insert(topic.name.clone()) {
            return Err(Error::DuplicateTopic(topic.name.clone()));
        }
        for kw in &mut topic.keywords {
            *kw = kw.to_lowercase();
        }
    }
    if topics.is_empty() {
        return Err(Error::InvalidParameter("topics file is empty".into()));
    }
    Ok(topics)
}

/// Candidate-selection parameters: cosine floor `s`, the minimum number of
/// documents taken regardless of `s`, and the cap `d_max` (0 encodes "all
/// documents").
#[derive(Debug, Clone, Copy)]
pub struct LabelParams {
    pub s: f64,
    pub d_min: usize,
    pub d_max: usize,
    pub lof: LofParams,
}

impl Default for LabelParams {
    fn default() -> Self {
        LabelParams {
            s: 0.43,
            d_min: 100,
            d_max: 0,
            lof: LofParams::default(),
        }
    }
}

impl LabelParams {
    /// Validates against a corpus of `n_docs` documents and resolves the
    /// `d_max = 0` encoding. Requires 1 <= d_min <= d_max <= n_docs.
    pub fn resolve(&self, n_docs: usize) -> Result<ResolvedLabelParams> {
        if !(-1.0..=1.0).contains(&self.s) {
            return Err(Error::InvalidParameter(format!(
                "similarity threshold s must be in [-1, 1], got {}",
                self.s
            )));
        }
        if self.d_min < 1 {
            return Err(Error::InvalidParameter("d_min must be >= 1".into()));
        }
        let d_max = if self.d_max == 0 { n_docs } else { self.d_max };
        if self.d_min > d_max {
            return Err(Error::InvalidParameter(format!(
                "d_min ({}) must not exceed d_max ({d_max})",
                self.d_min
            )));
        }
        if d_max > n_docs {
            return Err(Error::InvalidParameter(format!(
                "d_max ({d_max}) exceeds corpus size ({n_docs})"
            )));
        }
        self.lof.validate()?;
        Ok(ResolvedLabelParams {
            s: self.s,
            d_min: self.d_min,
            d_max,
            lof: self.lof,
        })
    }
}

/// [`LabelParams`] after validation, with `d_max` made concrete.
#[derive(Debug, Clone, Copy)]
pub struct ResolvedLabelParams {
    pub s: f64,
    pub d_min: usize,
    pub d_max: usize,
    pub lof: LofParams,
}

/// The documents admitted for a topic: every candidate in rank order, their
/// cosines to the keyword centroid, and the subset surviving outlier
/// cleaning.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub topic: String,
    /// Candidates by descending cosine, ties broken by ascending doc id.
    pub ranked_candidate_ids: Vec<DocId>,
    /// Cosine to the keyword centroid, aligned with `ranked_candidate_ids`.
    pub similarities: Vec<f64>,
    /// Candidates kept after outlier cleaning, still in rank order.
    pub kept_ids: Vec<DocId>,
}

/// A topic's position in the shared feature space, with provenance counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelEmbedding {
    pub topic: String,
    pub vector: Vec<f64>,
    pub candidate_count: usize,
    pub kept_count: usize,
    pub oov_keywords: Vec<String>,
}

/// Component-wise arithmetic mean.
pub fn centroid(vectors: &[Vec<f64>]) -> Result<Vec<f64>> {
    let first = vectors.first().ok_or(Error::EmptyCentroid)?;
    let dim = first.len();
    let mut mean = vec![0.0f64; dim];
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        for (m, x) in mean.iter_mut().zip(v) {
            *m += x;
        }
    }
    let n = vectors.len() as f64;
    for m in &mut mean {
        *m /= n;
    }
    Ok(mean)
}

/// Centroid of the topic's in-vocabulary keyword vectors, plus the keywords
/// that were skipped as out-of-vocabulary. Errs only when nothing is left.
pub fn keyword_centroid(
    model: &EmbeddingModel,
    topic: &TopicSpec,
) -> Result<(Vec<f64>, Vec<String>)> {
    let mut vectors = Vec::new();
    let mut oov = Vec::new();
    for keyword in &topic.keywords {
        match model.word_vector(keyword) {
            Ok(v) => vectors.push(widen(v)),
            Err(Error::OutOfVocabulary(_)) => oov.push(keyword.clone()),
            Err(e) => return Err(e),
        }
    }
    if vectors.is_empty() {
        return Err(Error::AllKeywordsOov {
            topic: topic.name.clone(),
            keywords: oov,
        });
    }
    if !oov.is_empty() {
        log::warn!(
            "topic {:?}: skipping {} out-of-vocabulary keyword(s): {:?}",
            topic.name,
            oov.len(),
            oov
        );
    }
    Ok((centroid(&vectors)?, oov))
}

/// Ranks all documents by cosine against `keyword_centroid` and admits the
/// top `d_min` unconditionally, then keeps admitting while the cosine
/// exceeds `s`, never past `d_max`. The returned set has no topic name and
/// no kept subset yet; `compute_label_embedding` fills those.
pub fn select_candidates(
    model: &EmbeddingModel,
    keyword_centroid: &[f64],
    params: &LabelParams,
) -> Result<CandidateSet> {
    let n = model.n_docs();
    let params = params.resolve(n)?;

    let mut ranked: Vec<(DocId, f64)> = (0..n)
        .map(|doc_id| {
            let sim = cosine_mixed(
                model.doc_vector(doc_id).expect("doc id in range"),
                keyword_centroid,
            );
            (doc_id, sim)
        })
        .collect();
    ranked.sort_unstable_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut take = params.d_min;
    while take < params.d_max && ranked[take].1 > params.s {
        take += 1;
    }
    ranked.truncate(take);

    let (ranked_candidate_ids, similarities) = ranked.into_iter().unzip();
    Ok(CandidateSet {
        topic: String::new(),
        ranked_candidate_ids,
        similarities,
        kept_ids: Vec::new(),
    })
}

/// Runs the full per-topic pipeline: keyword centroid, candidate selection,
/// outlier cleaning, and the centroid of the kept documents as the label
/// vector.
pub fn compute_label_embedding(
    model: &EmbeddingModel,
    topic: &TopicSpec,
    params: &LabelParams,
) -> Result<(LabelEmbedding, CandidateSet)> {
    let (kbar, oov_keywords) = keyword_centroid(model, topic)?;
    let mut candidates = select_candidates(model, &kbar, params)?;
    candidates.topic = topic.name.clone();

    let points: Vec<Vec<f64>> = candidates
        .ranked_candidate_ids
        .iter()
        .map(|&id| widen(model.doc_vector(id).expect("candidate id in range")))
        .collect();

    // LOF needs two points to compare densities; a single candidate is kept.
    let kept_positions: Vec<usize> = if points.len() < 2 {
        (0..points.len()).collect()
    } else {
        filter_outliers(&points, &params.lof)?
    };
    candidates.kept_ids = kept_positions
        .iter()
        .map(|&p| candidates.ranked_candidate_ids[p])
        .collect();

    let kept_vectors: Vec<Vec<f64>> = kept_positions.iter().map(|&p| points[p].clone()).collect();
    let vector = centroid(&kept_vectors)?;

    Ok((
        LabelEmbedding {
            topic: topic.name.clone(),
            vector,
            candidate_count: candidates.ranked_candidate_ids.len(),
            kept_count: candidates.kept_ids.len(),
            oov_keywords,
        },
        candidates,
    ))
}

/// Writes label embeddings as a JSON array.
pub fn save_labels(labels: &[LabelEmbedding], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    serde_json::to_writer_pretty(BufWriter::new(file), labels)
        .map_err(|e| Error::io(path, e.into()))?;
    Ok(())
}

/// Reads label embeddings written by [`save_labels`].
pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<LabelEmbedding>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let labels: Vec<LabelEmbedding> = serde_json::from_reader(BufReader::new(file))
        .map_err(|e| Error::InvalidParameter(format!("labels file {}: {e}", path.display())))?;
    Ok(labels)
}
