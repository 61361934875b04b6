use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FeatureMatrix, RankedColumn};
use crate::error::{Error, Result};

/// Result of the near-zero-variance filter.
#[derive(Debug, Clone)]
pub struct NzvOutcome {
    pub matrix: FeatureMatrix,
    pub dropped: Vec<String>,
}

/// Removes columns whose variance, measured after min-max scaling the
/// column to `[0, 1]`, is below `cutoff`. Constant columns are always
/// removed. Surviving columns keep their original values and order.
pub fn near_zero_variance_filter(m: &FeatureMatrix, cutoff: f64) -> Result<NzvOutcome> {
    if m.n_samples() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            found: m.n_samples(),
        });
    }
    let mut keep = Vec::new();
    let mut dropped = Vec::new();
    for j in 0..m.n_features() {
        if scaled_variance(m.column(j)).is_some_and(|v| v >= cutoff) {
            keep.push(j);
        } else {
            dropped.push(m.columns()[j].clone());
        }
    }
    if keep.is_empty() {
        return Err(Error::AllColumnsRemoved);
    }
    Ok(NzvOutcome {
        matrix: m.select_columns(&keep),
        dropped,
    })
}

/// Population variance of the column rescaled to `[0, 1]`; `None` when the
/// column is constant.
pub fn scaled_variance(col: &[f64]) -> Option<f64> {
    let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    if range <= 0.0 {
        return None;
    }
    let n = col.len() as f64;
    let scaled: Vec<f64> = col.iter().map(|v| (v - lo) / range).collect();
    let mean = scaled.iter().sum::<f64>() / n;
    Some(scaled.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n)
}

/// One column removed by [`correlation_prune`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneDrop {
    pub dropped: String,
    pub correlated_with: String,
    pub rho: f64,
}

#[derive(Debug, Clone)]
pub struct PruneOutcome {
    pub matrix: FeatureMatrix,
    pub dropped: Vec<PruneDrop>,
}

/// |Spearman| between all column pairs; undefined correlations count as 0.
pub(crate) fn abs_spearman_matrix(m: &FeatureMatrix) -> (Vec<Vec<f64>>, Vec<Vec<Option<f64>>>) {
    let ranked: Vec<RankedColumn> = (0..m.n_features())
        .into_par_iter()
        .map(|j| RankedColumn::new(m.column(j)))
        .collect();
    let signed: Vec<Vec<Option<f64>>> = (0..ranked.len())
        .into_par_iter()
        .map(|i| {
            (0..ranked.len())
                .map(|j| {
                    if i == j {
                        None
                    } else {
                        ranked[i].correlation(&ranked[j])
                    }
                })
                .collect()
        })
        .collect();
    let abs = signed
        .iter()
        .map(|row| row.iter().map(|r| r.map_or(0.0, f64::abs)).collect())
        .collect();
    (abs, signed)
}

/// Greedy removal of strongly rank-correlated columns.
///
/// While some pair has |ρ| above `threshold`, take the pair with the
/// largest |ρ| (earliest pair on ties) and drop whichever member has the
/// higher mean |ρ| to the other remaining columns (the later column on
/// ties).
pub fn correlation_prune(m: &FeatureMatrix, threshold: f64) -> Result<PruneOutcome> {
    if m.n_samples() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            found: m.n_samples(),
        });
    }
    let p = m.n_features();
    let (abs, signed) = abs_spearman_matrix(m);
    let mut alive = vec![true; p];
    let mut dropped = Vec::new();
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in (0..p).filter(|&i| alive[i]) {
            for j in (i + 1..p).filter(|&j| alive[j]) {
                let r = abs[i][j];
                if r > threshold && best.is_none_or(|(_, _, b)| r > b) {
                    best = Some((i, j, r));
                }
            }
        }
        let Some((i, j, _)) = best else { break };
        let mean_abs = |k: usize| {
            let others = (0..p).filter(|&o| alive[o] && o != k);
            let (sum, n) = others.fold((0.0, 0usize), |(s, n), o| (s + abs[k][o], n + 1));
            sum / n as f64
        };
        let (drop, keep) = if mean_abs(i) > mean_abs(j) {
            (i, j)
        } else {
            (j, i)
        };
        alive[drop] = false;
        dropped.push(PruneDrop {
            dropped: m.columns()[drop].clone(),
            correlated_with: m.columns()[keep].clone(),
            rho: signed[drop][keep].unwrap_or(0.0),
        });
    }
    let keep: Vec<usize> = (0..p).filter(|&j| alive[j]).collect();
    Ok(PruneOutcome {
        matrix: m.select_columns(&keep),
        dropped,
    })
}
