//! ROC curves from threshold sweeps and their trapezoidal AUC.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// One operating point: the rates obtained by accepting scores `>= threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// Threshold sweep over the distinct scores, from (0,0) at an unreachable
/// threshold down to (1,1) at the minimum score.
#[derive(Debug, Clone, Serialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

/// Sweeps every distinct score as a threshold and integrates the curve by
/// the trapezoid rule. Tied scores collapse into one diagonal segment, so
/// the area equals the Mann-Whitney statistic with ties counted half.
pub fn roc_auc(scores: &[f64], is_positive: &[bool]) -> Result<RocCurve> {
    if scores.len() != is_positive.len() {
        return Err(Error::LengthMismatch {
            x: scores.len(),
            y: is_positive.len(),
        });
    }
    let positives = is_positive.iter().filter(|&&p| p).count();
    let negatives = is_positive.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        // Absorb the whole tie group before emitting a point.
        while i < order.len() && scores[order[i]] == threshold {
            if is_positive[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            threshold,
            fpr: fp as f64 / negatives as f64,
            tpr: tp as f64 / positives as f64,
        });
    }

    let auc = trapezoid_area(&points);
    Ok(RocCurve { points, auc })
}

fn trapezoid_area(points: &[RocPoint]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[0].tpr + w[1].tpr) / 2.0)
        .sum()
}

/// Pools the one-vs-rest (score, is_positive) pairs of every topic and
/// computes a single curve over them.
pub fn micro_average_roc(per_topic: &[(Vec<f64>, Vec<bool>)]) -> Result<RocCurve> {
    if per_topic.len() < 2 {
        return Err(Error::InvalidParameter(
            "micro-average ROC needs at least 2 topics".into(),
        ));
    }
    let mut scores = Vec::new();
    let mut labels = Vec::new();
    for (topic_scores, topic_labels) in per_topic {
        if topic_scores.len() != topic_labels.len() {
            return Err(Error::LengthMismatch {
                x: topic_scores.len(),
                y: topic_labels.len(),
            });
        }
        scores.extend_from_slice(topic_scores);
        labels.extend_from_slice(topic_labels);
    }
    roc_auc(&scores, &labels)
}

/// Renders curves as CSV with a `topic,threshold,fpr,tpr` header, one row
/// per operating point.
pub fn roc_csv(curves: &[(String, RocCurve)]) -> String {
    let mut out = String::from("topic,threshold,fpr,tpr\n");
    for (topic, curve) in curves {
        for p in &curve.points {
            let _ = writeln!(out, "{topic},{},{},{}", p.threshold, p.fpr, p.tpr);
        }
    }
    out
}
