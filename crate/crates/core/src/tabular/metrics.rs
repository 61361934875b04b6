use serde::{Deserialize, Serialize};

use super::{fractional_ranks, Label, MALIGNANT};
use crate::error::{Error, Result};

/// Scores at or above this value are called positive.
pub const DECISION_THRESHOLD: f64 = 0.5;

/// Binary classification metrics at the fixed decision threshold.
///
/// Ratios whose denominator is zero are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub auroc: f64,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub ppv: Option<f64>,
    pub npv: Option<f64>,
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn check_lengths(scores: &[f64], labels: &[Label]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: labels.len(),
            found: scores.len(),
        });
    }
    Ok(())
}

/// Mann-Whitney AUROC using midranks, so ties count one half.
pub fn auroc(scores: &[f64], labels: &[Label]) -> Result<f64> {
    check_lengths(scores, labels)?;
    let n_pos = labels.iter().filter(|&&l| l == MALIGNANT).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let ranks = fractional_ranks(scores);
    let rank_sum: f64 = ranks
        .iter()
        .zip(labels)
        .filter(|(_, &l)| l == MALIGNANT)
        .map(|(r, _)| r)
        .sum();
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

pub fn evaluate(scores: &[f64], labels: &[Label]) -> Result<MetricsReport> {
    let auroc = auroc(scores, labels)?;
    let (mut tp, mut tn, mut fp, mut fn_) = (0, 0, 0, 0);
    for (&s, &l) in scores.iter().zip(labels) {
        match (s >= DECISION_THRESHOLD, l == MALIGNANT) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    Ok(MetricsReport {
        accuracy: (tp + tn) as f64 / labels.len() as f64,
        auroc,
        sensitivity: ratio(tp, tp + fn_),
        specificity: ratio(tn, tn + fp),
        ppv: ratio(tp, tp + fp),
        npv: ratio(tn, tn + fn_),
        tp,
        tn,
        fp,
        fn_,
    })
}

/// Mean and sample standard deviation over the defined values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    /// Number of folds contributing a defined value.
    pub n: usize,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let std = if v.len() > 1 {
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(Self {
            mean,
            std,
            n: v.len(),
        })
    }
}

/// Per-metric summaries across cross-validation folds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PooledMetrics {
    pub accuracy: Summary,
    pub auroc: Summary,
    pub sensitivity: Option<Summary>,
    pub specificity: Option<Summary>,
    pub ppv: Option<Summary>,
    pub npv: Option<Summary>,
    pub folds: usize,
}

impl PooledMetrics {
    pub fn from_reports(reports: &[MetricsReport]) -> Result<Self> {
        let pick = |f: fn(&MetricsReport) -> Option<f64>| Summary::of(reports.iter().filter_map(f));
        let empty = || Error::InvalidInput("no fold reports to pool".into());
        Ok(Self {
            accuracy: pick(|r| Some(r.accuracy)).ok_or_else(empty)?,
            auroc: pick(|r| Some(r.auroc)).ok_or_else(empty)?,
            sensitivity: pick(|r| r.sensitivity),
            specificity: pick(|r| r.specificity),
            ppv: pick(|r| r.ppv),
            npv: pick(|r| r.npv),
            folds: reports.len(),
        })
    }
}
