//! Kendall's tau-b rank correlation with a two-sided normal-approximation
//! p-value, tie-corrected as in standard statistical packages.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CorrelationResult {
    pub tau: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Kendall's tau-b between two observation vectors:
///
///   tau_b = S / sqrt((n0 - n1)(n0 - n2))
///
/// with S the concordant-minus-discordant pair count, n0 = n(n-1)/2, and
/// n1/n2 the tied-pair counts in x/y. The p-value tests S against its
/// tie-adjusted variance under independence, two-sided.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            x: x.len(),
            y: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewObservations(n));
    }

    // Pair scan; at the scale of topic counts the quadratic cost is moot.
    let mut s = 0i64;
    for i in 0..n {
        for j in (i + 1)..n {
            let cx = x[i].total_cmp(&x[j]) as i64;
            let cy = y[i].total_cmp(&y[j]) as i64;
            s += cx * cy;
        }
    }

    let tie_stats = |values: &[f64]| -> TieStats {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut stats = TieStats::default();
        let mut run = 1u64;
        for i in 1..=sorted.len() {
            if i < sorted.len() && sorted[i] == sorted[i - 1] {
                run += 1;
                continue;
            }
            stats.absorb(run);
            run = 1;
        }
        stats
    };
    let tx = tie_stats(x);
    let ty = tie_stats(y);

    let n = n as f64;
    let n0 = n * (n - 1.0) / 2.0;
    if tx.tied_pairs >= n0 || ty.tied_pairs >= n0 {
        return Err(Error::ConstantInput);
    }

    let tau = s as f64 / ((n0 - tx.tied_pairs) * (n0 - ty.tied_pairs)).sqrt();

    // Tie-adjusted variance of S.
    let v0 = n * (n - 1.0) * (2.0 * n + 5.0);
    let var_s = (v0 - tx.v_cubic - ty.v_cubic) / 18.0
        + tx.v1 * ty.v1 / (2.0 * n * (n - 1.0))
        + tx.v2 * ty.v2 / (9.0 * n * (n - 1.0) * (n - 2.0));
    let z = s as f64 / var_s.sqrt();

    Ok(CorrelationResult {
        tau: tau.clamp(-1.0, 1.0),
        p_value: two_sided_p(z),
        n: x.len(),
    })
}

/// Two-sided p-value for an observed tau at sample size n, assuming no
/// ties: under independence tau is approximately normal with variance
/// 2(2n+5) / (9n(n-1)).
pub fn p_value_from_tau(tau: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::TooFewObservations(n));
    }
    if !(-1.0..=1.0).contains(&tau) {
        return Err(Error::InvalidParameter(format!(
            "tau must be in [-1, 1], got {tau}"
        )));
    }
    let n = n as f64;
    let variance = 2.0 * (2.0 * n + 5.0) / (9.0 * n * (n - 1.0));
    Ok(two_sided_p(tau / variance.sqrt()))
}

fn two_sided_p(z: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * normal.sf(z.abs())).clamp(0.0, 1.0)
}

/// Per-vector tie aggregates: sum over tie groups of size t of t(t-1)/2,
/// t(t-1)(2t+5), t(t-1), and t(t-1)(t-2).
#[derive(Default)]
struct TieStats {
    tied_pairs: f64,
    v_cubic: f64,
    v1: f64,
    v2: f64,
}

impl TieStats {
    fn absorb(&mut self, run: u64) {
        let t = run as f64;
        self.tied_pairs += t * (t - 1.0) / 2.0;
        self.v_cubic += t * (t - 1.0) * (2.0 * t + 5.0);
        self.v1 += t * (t - 1.0);
        self.v2 += t * (t - 1.0) * (t - 2.0);
    }
}
