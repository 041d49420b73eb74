//! Classification metrics, ROC/AUC, and keyword-analysis statistics.

mod kendall;
mod keywords;
mod roc;

pub use kendall::{kendall_tau, p_value_from_tau, CorrelationResult};
pub use keywords::{
    analyze_keywords, intertopic_similarity, intratopic_similarity, KeywordAnalysis,
    TopicKeywordStats,
};
pub use roc::{micro_average_roc, roc_auc, roc_csv, RocCurve, RocPoint};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::retrieval::PredictionRecord;

/// Micro-averaged precision, recall, and F1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicroPrf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// The evaluation report persisted as JSON: classification metrics plus
/// per-topic and micro-averaged AUC. Keyword analysis reads the AUC values
/// back from this file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub micro: MicroPrf,
    pub per_topic_auc: BTreeMap<String, f64>,
    pub micro_average_auc: f64,
}

/// Micro-averages over all (document, topic) decisions: an accepted correct
/// assignment is a true positive; an accepted wrong assignment counts as a
/// false positive for the predicted topic and a false negative for the gold
/// topic; a rejected document is a false negative for its gold topic. Under
/// full single-label assignment this makes precision, recall, and F1 equal.
pub fn micro_prf(predictions: &[PredictionRecord], gold: &[Option<&str>]) -> Result<MicroPrf> {
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fn_ = 0u64;
    for prediction in predictions {
        let gold_label = gold
            .get(prediction.doc_id)
            .copied()
            .flatten()
            .ok_or(Error::MissingGoldLabel(prediction.doc_id))?;
        match (&prediction.topic, prediction.accepted) {
            (Some(topic), true) if topic == gold_label => tp += 1,
            (Some(_), true) => {
                fp += 1;
                fn_ += 1;
            }
            _ => fn_ += 1,
        }
    }

    let precision = if tp + fp == 0 {
        0.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let recall = if tp + fn_ == 0 {
        0.0
    } else {
        tp as f64 / (tp + fn_) as f64
    };
    // 2TP / (2TP + FP + FN): exact integer form, so P == R implies F1 == P
    // bit for bit.
    let f1 = if 2 * tp + fp + fn_ == 0 {
        0.0
    } else {
        (2 * tp) as f64 / (2 * tp + fp + fn_) as f64
    };
    Ok(MicroPrf {
        precision,
        recall,
        f1,
    })
}
