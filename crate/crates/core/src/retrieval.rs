//! Scoring documents against label embeddings: per-topic retrieval and
//! multiclass classification with a reject option.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingModel;
use crate::error::{Error, Result};
use crate::labeling::LabelEmbedding;
use crate::DocId;

/// Per-topic acceptance thresholds. A document assigned to topic `t` is
/// accepted only when its similarity strictly exceeds `alpha_for(t)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaConfig {
    pub default_alpha: f64,
    #[serde(default)]
    pub per_topic: BTreeMap<String, f64>,
}

impl AlphaConfig {
    /// Accept-everything configuration (alpha = -1 for all topics).
    pub fn accept_all() -> AlphaConfig {
        AlphaConfig {
            default_alpha: -1.0,
            per_topic: BTreeMap::new(),
        }
    }

    pub fn uniform(alpha: f64) -> AlphaConfig {
        AlphaConfig {
            default_alpha: alpha,
            per_topic: BTreeMap::new(),
        }
    }

    pub fn alpha_for(&self, topic: &str) -> f64 {
        self.per_topic
            .get(topic)
            .copied()
            .unwrap_or(self.default_alpha)
    }

    pub fn validate(&self) -> Result<()> {
        let all = std::iter::once(&self.default_alpha).chain(self.per_topic.values());
        for &alpha in all {
            if !(-1.0..=1.0).contains(&alpha) {
                return Err(Error::InvalidParameter(format!(
                    "alpha must be in [-1, 1], got {alpha}"
                )));
            }
        }
        Ok(())
    }
}

/// One document's similarities to every topic and the resulting decision.
/// Rejected documents keep their argmax topic but are flagged unaccepted so
/// downstream evaluation can count them.
#[derive(Debug, Clone)]
pub struct Prediction {
    pub doc_id: DocId,
    /// (topic, similarity) in label-list order.
    pub similarities: Vec<(String, f64)>,
    pub assigned_topic: Option<String>,
    pub accepted: bool,
}

impl Prediction {
    /// Similarity of the assigned topic.
    pub fn max_similarity(&self) -> Option<f64> {
        let assigned = self.assigned_topic.as_deref()?;
        self.similarities
            .iter()
            .find(|(t, _)| t == assigned)
            .map(|&(_, s)| s)
    }
}

/// Cosine of one document against every label embedding, in label order.
pub fn score_document(
    model: &EmbeddingModel,
    labels: &[LabelEmbedding],
    doc_id: DocId,
) -> Result<Vec<(String, f64)>> {
    if labels.is_empty() {
        return Err(Error::InvalidParameter("no label embeddings given".into()));
    }
    labels
        .iter()
        .map(|label| {
            model
                .doc_similarity(doc_id, &label.vector)
                .map(|sim| (label.topic.clone(), sim))
        })
        .collect()
}

/// All documents whose similarity to `label` strictly exceeds `alpha`,
/// sorted by similarity descending, ties by ascending doc id.
pub fn retrieve(
    model: &EmbeddingModel,
    label: &LabelEmbedding,
    alpha: f64,
) -> Result<Vec<(DocId, f64)>> {
    if !(-1.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be in [-1, 1], got {alpha}"
        )));
    }
    let mut hits: Vec<(DocId, f64)> = (0..model.n_docs())
        .filter_map(|doc_id| {
            let sim = model
                .doc_similarity(doc_id, &label.vector)
                .expect("doc id in range");
            (sim > alpha).then_some((doc_id, sim))
        })
        .collect();
    hits.sort_unstable_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(hits)
}

/// Classifies every document: argmax similarity over topics (ties resolved
/// by label-list order), accepted only when that similarity strictly
/// exceeds the topic's alpha.
pub fn classify(
    model: &EmbeddingModel,
    labels: &[LabelEmbedding],
    alphas: &AlphaConfig,
) -> Result<Vec<Prediction>> {
    if labels.is_empty() {
        return Err(Error::InvalidParameter("no label embeddings given".into()));
    }
    alphas.validate()?;
    (0..model.n_docs())
        .map(|doc_id| {
            let similarities = score_document(model, labels, doc_id)?;
            let (best_topic, best_sim) = similarities
                .iter()
                .fold(None::<(&str, f64)>, |best, (topic, sim)| match best {
                    Some((_, s)) if *sim <= s => best,
                    _ => Some((topic, *sim)),
                })
                .expect("labels is non-empty");
            let accepted = best_sim > alphas.alpha_for(best_topic);
            Ok(Prediction {
                doc_id,
                assigned_topic: Some(best_topic.to_string()),
                accepted,
                similarities,
            })
        })
        .collect()
}

/// The JSONL record for one prediction: scores keyed by topic name.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub doc_id: DocId,
    pub topic: Option<String>,
    pub similarity: Option<f64>,
    pub accepted: bool,
    pub scores: BTreeMap<String, f64>,
}

impl From<&Prediction> for PredictionRecord {
    fn from(p: &Prediction) -> Self {
        PredictionRecord {
            doc_id: p.doc_id,
            topic: p.assigned_topic.clone(),
            similarity: p.max_similarity(),
            accepted: p.accepted,
            scores: p.similarities.iter().cloned().collect(),
        }
    }
}

/// Writes predictions as JSONL, one record per document.
pub fn save_predictions(predictions: &[Prediction], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for prediction in predictions {
        let record = PredictionRecord::from(prediction);
        let line = serde_json::to_string(&record).map_err(|e| Error::io(path, e.into()))?;
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads predictions written by [`save_predictions`].
pub fn load_predictions(path: impl AsRef<Path>) -> Result<Vec<PredictionRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    BufReader::new(file)
        .lines()
        .enumerate()
        .map(|(idx, line)| {
            let line = line.map_err(|e| Error::io(path, e))?;
            serde_json::from_str(&line).map_err(|e| Error::MalformedLine {
                line: idx + 1,
                message: e.to_string(),
            })
        })
        .collect()
}
