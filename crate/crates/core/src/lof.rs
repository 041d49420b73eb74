//! Local Outlier Factor scoring (Breunig et al.) over Euclidean distances,
//! used to drop candidate documents whose local density is much lower than
//! that of their neighbors before a label centroid is formed.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Ceiling for the local reachability density when a point's neighbors all
/// coincide with it (mean reachability distance 0). Duplicated points then
/// score LOF = 1 against each other instead of dividing by zero.
const MAX_LRD: f64 = 1e12;

/// Neighborhood size and the score cutoff above which a point counts as an
/// outlier. Defaults (k=20, threshold=1.5) suit candidate sets of hundreds
/// of documents.
#[derive(Debug, Clone, Copy)]
pub struct LofParams {
    pub k: usize,
    pub score_threshold: f64,
}

impl Default for LofParams {
    fn default() -> Self {
        LofParams {
            k: 20,
            score_threshold: 1.5,
        }
    }
}

impl LofParams {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidParameter("lof k must be >= 1".into()));
        }
        if !self.score_threshold.is_finite() || self.score_threshold <= 0.0 {
            return Err(Error::InvalidParameter(
                "lof score threshold must be > 0".into(),
            ));
        }
        Ok(())
    }
}

/// LOF score per point. `k` is clamped to `points.len() - 1`; neighborhoods
/// include every point tied at the k-distance.
///
/// Scores near 1 mean density comparable to the neighborhood; scores well
/// above 1 mean locally sparse, i.e. outlying.
pub fn lof_scores(points: &[Vec<f64>], k: usize) -> Result<Vec<f64>> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("lof k must be >= 1".into()));
    }
    let k = k.min(n - 1);
    if let Some(first) = points.first() {
        for p in points {
            if p.len() != first.len() {
                return Err(Error::DimensionMismatch {
                    expected: first.len(),
                    got: p.len(),
                });
            }
        }
    }

    // All pairwise distances: candidate sets are small enough that the
    // quadratic cost is acceptable and keeps the scores exact.
    let distances: Vec<Vec<f64>> = points
        .par_iter()
        .map(|p| points.iter().map(|q| euclidean(p, q)).collect())
        .collect();

    // k-distance and neighborhood (all points within the k-distance).
    let mut k_distance = vec![0.0f64; n];
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let mut others: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| distances[i][j]).collect();
        others.sort_unstable_by(f64::total_cmp);
        k_distance[i] = others[k - 1];
        neighbors[i] = (0..n)
            .filter(|&j| j != i && distances[i][j] <= k_distance[i])
            .collect();
    }

    // Local reachability density: reciprocal mean reachability distance,
    // reach-dist_k(p, o) = max(k-distance(o), d(p, o)).
    let lrd: Vec<f64> = (0..n)
        .map(|i| {
            let sum: f64 = neighbors[i]
                .iter()
                .map(|&o| distances[i][o].max(k_distance[o]))
                .sum();
            let mean = sum / neighbors[i].len() as f64;
            if mean == 0.0 {
                MAX_LRD
            } else {
                (1.0 / mean).min(MAX_LRD)
            }
        })
        .collect();

    Ok((0..n)
        .map(|i| {
            let sum: f64 = neighbors[i].iter().map(|&o| lrd[o]).sum();
            sum / (neighbors[i].len() as f64 * lrd[i])
        })
        .collect())
}

/// Indices of the points to keep (LOF <= threshold), in input order. If
/// every point exceeds the threshold the single lowest-scoring point is
/// kept, with a warning, so a candidate set never empties entirely.
pub fn filter_outliers(points: &[Vec<f64>], params: &LofParams) -> Result<Vec<usize>> {
    params.validate()?;
    let scores = lof_scores(points, params.k)?;
    let kept: Vec<usize> = (0..points.len())
        .filter(|&i| scores[i] <= params.score_threshold)
        .collect();
    if kept.is_empty() {
        let best = scores
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("at least two points");
        log::warn!(
            "all {} points exceed LOF threshold {}; keeping the least outlying point {}",
            points.len(),
            params.score_threshold,
            best
        );
        return Ok(vec![best]);
    }
    Ok(kept)
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
