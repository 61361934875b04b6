use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Classifier;
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::tabular::{
    evaluate, stratified_folds, CvScheme, FeatureMatrix, FoldAssignment, MetricsReport,
    PooledMetrics, DECISION_THRESHOLD, MALIGNANT,
};

/// Seed for the model trained on `(repeat, fold)`.
fn fold_seed(seed: u64, repeat: usize, fold: usize) -> u64 {
    derive_seed(seed, &[repeat as u64, fold as u64])
}

fn fold_split(
    m: &FeatureMatrix,
    folds: &FoldAssignment,
    repeat: usize,
    fold: usize,
) -> (FeatureMatrix, FeatureMatrix) {
    (
        m.select_rows(&folds.train_indices(repeat, fold)),
        m.select_rows(&folds.test_indices(repeat, fold)),
    )
}

/// Mean held-out accuracy over every (repeat, fold) of `scheme`.
pub fn cv_accuracy<C: Classifier>(
    m: &FeatureMatrix,
    classifier: &C,
    scheme: &CvScheme,
    seed: u64,
) -> Result<f64> {
    let labels = m.require_labels()?;
    let folds = stratified_folds(labels, scheme)?;
    let accs: Vec<f64> = folds
        .units()
        .into_par_iter()
        .map(|(r, f)| {
            let (train, test) = fold_split(m, &folds, r, f);
            let model = classifier.fit(&train, fold_seed(seed, r, f))?;
            let p = classifier.predict_proba(&model, &test)?;
            let y = test.require_labels()?;
            let ok = p
                .iter()
                .zip(y)
                .filter(|(&s, &l)| (s >= DECISION_THRESHOLD) == (l == MALIGNANT))
                .count();
            Ok(ok as f64 / y.len() as f64)
        })
        .collect::<Result<_>>()?;
    Ok(accs.iter().sum::<f64>() / accs.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SfsParams {
    pub k_max: usize,
    pub patience: usize,
}

impl Default for SfsParams {
    fn default() -> Self {
        Self {
            k_max: 10,
            patience: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub schema_version: u32,
    pub chosen: Vec<String>,
    /// Mean CV accuracy after each addition.
    pub cv_accuracy_path: Vec<f64>,
    pub scheme: CvScheme,
    pub seed: u64,
}

/// Greedy forward selection maximizing mean CV accuracy.
///
/// Each step adds the column with the best accuracy (earliest column on
/// ties). Selection stops at `k_max` features or after `patience` steps
/// without improvement; the report keeps the best-scoring prefix.
pub fn sfs_select<C: Classifier>(
    m: &FeatureMatrix,
    classifier: &C,
    scheme: &CvScheme,
    params: &SfsParams,
    seed: u64,
) -> Result<SelectionReport> {
    if params.k_max == 0 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    m.require_labels()?;
    let mut chosen: Vec<usize> = Vec::new();
    let mut path = Vec::new();
    let mut best = (f64::NEG_INFINITY, 0);
    let mut stale = 0;
    while chosen.len() < params.k_max.min(m.n_features()) {
        let candidates: Vec<usize> = (0..m.n_features())
            .filter(|j| !chosen.contains(j))
            .collect();
        let scores: Vec<f64> = candidates
            .par_iter()
            .map(|&c| {
                let mut cols = chosen.clone();
                cols.push(c);
                cv_accuracy(&m.select_columns(&cols), classifier, scheme, seed)
            })
            .collect::<Result<_>>()?;
        let mut pick = 0;
        for (i, &s) in scores.iter().enumerate() {
            if s > scores[pick] {
                pick = i;
            }
        }
        chosen.push(candidates[pick]);
        path.push(scores[pick]);
        if scores[pick] > best.0 {
            best = (scores[pick], chosen.len());
            stale = 0;
        } else {
            stale += 1;
            if stale >= params.patience {
                break;
            }
        }
    }
    chosen.truncate(best.1);
    path.truncate(best.1);
    Ok(SelectionReport {
        schema_version: 1,
        chosen: chosen.iter().map(|&j| m.columns()[j].clone()).collect(),
        cv_accuracy_path: path,
        scheme: *scheme,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub repeat: usize,
    pub fold: usize,
    pub metrics: MetricsReport,
}

/// Outcome of [`cv_select_best`].
#[derive(Debug, Clone)]
pub struct CvOutcome<M> {
    /// Model with the highest held-out accuracy.
    pub model: M,
    pub best_repeat: usize,
    pub best_fold: usize,
    pub folds: Vec<FoldResult>,
    pub pooled: PooledMetrics,
}

/// Trains one model per (repeat, fold) and keeps the most accurate one
/// (earliest repeat, then fold, on ties).
pub fn cv_select_best<C: Classifier>(
    m: &FeatureMatrix,
    classifier: &C,
    scheme: &CvScheme,
    seed: u64,
) -> Result<CvOutcome<C::Model>> {
    let labels = m.require_labels()?;
    let folds = stratified_folds(labels, scheme)?;
    let results: Vec<(C::Model, FoldResult)> = folds
        .units()
        .into_par_iter()
        .map(|(repeat, fold)| {
            let (train, test) = fold_split(m, &folds, repeat, fold);
            let model = classifier.fit(&train, fold_seed(seed, repeat, fold))?;
            let p = classifier.predict_proba(&model, &test)?;
            let metrics = evaluate(&p, test.require_labels()?)
                .map_err(|e| e.context(format!("repeat {repeat} fold {fold}")))?;
            Ok((
                model,
                FoldResult {
                    repeat,
                    fold,
                    metrics,
                },
            ))
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, (_, r)) in results.iter().enumerate() {
        if r.metrics.accuracy > results[best].1.metrics.accuracy {
            best = i;
        }
    }
    let (models, fold_results): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let pooled =
        PooledMetrics::from_reports(&fold_results.iter().map(|r| r.metrics).collect::<Vec<_>>())?;
    let (best_repeat, best_fold) = (fold_results[best].repeat, fold_results[best].fold);
    let model = models.into_iter().nth(best).expect("best index in range");
    Ok(CvOutcome {
        model,
        best_repeat,
        best_fold,
        folds: fold_results,
        pooled,
    })
}
