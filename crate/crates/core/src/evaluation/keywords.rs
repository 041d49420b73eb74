//! Keyword-set geometry: how similar a topic's keywords are to each other
//! and to other topics' keywords, and how either relates to retrieval
//! quality (AUC) across topics.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::embedding::{cosine_similarity, widen, EmbeddingModel};
use crate::error::{Error, Result};
use crate::labeling::TopicSpec;

use super::kendall::{kendall_tau, CorrelationResult};

fn in_vocab_vectors(model: &EmbeddingModel, topic: &TopicSpec) -> Result<Vec<Vec<f64>>> {
    let vectors: Vec<Vec<f64>> = topic
        .keywords
        .iter()
        .filter_map(|k| model.word_vector(k).ok().map(widen))
        .collect();
    if vectors.is_empty() {
        return Err(Error::AllKeywordsOov {
            topic: topic.name.clone(),
            keywords: topic.keywords.clone(),
        });
    }
    Ok(vectors)
}

/// Mean cosine over ordered distinct pairs of the topic's in-vocabulary
/// keyword embeddings: sum over x != y of cos(k_x, k_y), divided by
/// |K|(|K|-1). Needs at least two in-vocabulary keywords.
pub fn intratopic_similarity(model: &EmbeddingModel, topic: &TopicSpec) -> Result<f64> {
    let vectors = in_vocab_vectors(model, topic)?;
    let k = vectors.len();
    if k < 2 {
        return Err(Error::TooFewKeywords {
            topic: topic.name.clone(),
            got: k,
        });
    }
    let mut sum = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            if i != j {
                sum += cosine_similarity(a, b);
            }
        }
    }
    Ok(sum / (k * (k - 1)) as f64)
}

/// Mean over the other topics of the mean pairwise cosine between this
/// topic's keyword embeddings and theirs.
pub fn intertopic_similarity(
    model: &EmbeddingModel,
    topic: &TopicSpec,
    others: &[TopicSpec],
) -> Result<f64> {
    if others.is_empty() {
        return Err(Error::NoOtherTopics);
    }
    let own = in_vocab_vectors(model, topic)?;
    let mut total = 0.0;
    for other in others {
        let theirs = in_vocab_vectors(model, other)?;
        let mut sum = 0.0;
        for a in &own {
            for b in &theirs {
                sum += cosine_similarity(a, b);
            }
        }
        total += sum / (own.len() * theirs.len()) as f64;
    }
    Ok(total / others.len() as f64)
}

/// Keyword statistics for one topic, paired with its AUC.
#[derive(Debug, Clone, Serialize)]
pub struct TopicKeywordStats {
    pub topic: String,
    pub keyword_count: usize,
    pub intratopic_similarity: f64,
    pub intertopic_similarity: f64,
    pub auc: f64,
}

/// The three keyword hypotheses tested at once: rank correlation of AUC
/// against keyword count, intratopic similarity, and intertopic similarity.
#[derive(Debug, Clone, Serialize)]
pub struct KeywordAnalysis {
    pub per_topic: Vec<TopicKeywordStats>,
    pub keyword_count_vs_auc: CorrelationResult,
    pub intratopic_vs_auc: CorrelationResult,
    pub intertopic_vs_auc: CorrelationResult,
}

/// Computes per-topic keyword statistics and correlates each against the
/// supplied per-topic AUC values. Topics missing from `auc_by_topic` are an
/// error; correlation needs every observation paired.
pub fn analyze_keywords(
    model: &EmbeddingModel,
    topics: &[TopicSpec],
    auc_by_topic: &BTreeMap<String, f64>,
) -> Result<KeywordAnalysis> {
    let mut per_topic = Vec::with_capacity(topics.len());
    for (i, topic) in topics.iter().enumerate() {
        let auc = *auc_by_topic
            .get(&topic.name)
            .ok_or_else(|| Error::TopicNotFound(topic.name.clone()))?;
        let others: Vec<TopicSpec> = topics
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, t)| t.clone())
            .collect();
        per_topic.push(TopicKeywordStats {
            topic: topic.name.clone(),
            keyword_count: topic.keywords.len(),
            intratopic_similarity: intratopic_similarity(model, topic)?,
            intertopic_similarity: intertopic_similarity(model, topic, &others)?,
            auc,
        });
    }

    let auc: Vec<f64> = per_topic.iter().map(|t| t.auc).collect();
    let counts: Vec<f64> = per_topic.iter().map(|t| t.keyword_count as f64).collect();
    let intra: Vec<f64> = per_topic.iter().map(|t| t.intratopic_similarity).collect();
    let inter: Vec<f64> = per_topic.iter().map(|t| t.intertopic_similarity).collect();

    Ok(KeywordAnalysis {
        keyword_count_vs_auc: kendall_tau(&counts, &auc)?,
        intratopic_vs_auc: kendall_tau(&intra, &auc)?,
        intertopic_vs_auc: kendall_tau(&inter, &auc)?,
        per_topic,
    })
}
