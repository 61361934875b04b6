use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Classifier;
use crate::error::{Error, Result};
use crate::rng::rng_for;
use crate::tabular::{FeatureMatrix, Label, MALIGNANT};

pub const FOREST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomForestParams {
    pub n_estimators: usize,
    pub seed: u64,
    /// Smallest number of (bootstrap) samples allowed in a child.
    pub min_samples_leaf: usize,
}

impl Default for RandomForestParams {
    fn default() -> Self {
        Self {
            n_estimators: 100,
            seed: 0,
            min_samples_leaf: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Node {
    /// Samples with `value <= threshold` go to `left`.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    /// Bootstrap class counts `[benign, malignant]`.
    Leaf { counts: [u32; 2] },
}

/// Binary tree stored as a node arena; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    fn leaf_for(&self, row: &[f64]) -> [u32; 2] {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[feature] <= threshold {
                        left
                    } else {
                        right
                    }
                }
                Node::Leaf { counts } => return counts,
            }
        }
    }

    /// Positive-class fraction of the leaf reached by `row`.
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let [neg, pos] = self.leaf_for(row);
        pos as f64 / (neg + pos) as f64
    }

    pub fn depth(&self) -> usize {
        fn walk(t: &Tree, at: usize) -> usize {
            match t.nodes[at] {
                Node::Split { left, right, .. } => 1 + walk(t, left).max(walk(t, right)),
                Node::Leaf { .. } => 0,
            }
        }
        walk(self, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForestModel {
    pub schema_version: u32,
    pub n_estimators: usize,
    pub seed: u64,
    pub min_samples_leaf: usize,
    /// Columns the trees index into, in split-index order.
    pub feature_names: Vec<String>,
    pub trees: Vec<Tree>,
}

impl ForestModel {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(s)?;
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != FOREST_SCHEMA_VERSION {
            return Err(Error::Format(format!(
                "unsupported forest schema_version {}",
                self.schema_version
            )));
        }
        if self.trees.is_empty() {
            return Err(Error::Format("forest has no trees".into()));
        }
        for tree in &self.trees {
            if tree.nodes.is_empty() {
                return Err(Error::Format("tree has no nodes".into()));
            }
            for node in &tree.nodes {
                match *node {
                    Node::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    } => {
                        if feature >= self.feature_names.len()
                            || !threshold.is_finite()
                            || left >= tree.nodes.len()
                            || right >= tree.nodes.len()
                        {
                            return Err(Error::Format("malformed split node".into()));
                        }
                    }
                    Node::Leaf { counts } => {
                        if counts == [0, 0] {
                            return Err(Error::Format("leaf with no samples".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn class_counts(labels: &[Label], idx: &[usize]) -> [u32; 2] {
    let pos = idx.iter().filter(|&&i| labels[i] == MALIGNANT).count() as u32;
    [idx.len() as u32 - pos, pos]
}

/// Sum over children of n·gini, i.e. `n - (c0² + c1²) / n`.
fn weighted_gini(c: [u32; 2]) -> f64 {
    let n = (c[0] + c[1]) as f64;
    let (a, b) = (c[0] as f64, c[1] as f64);
    n - (a * a + b * b) / n
}

struct Grower<'a, R> {
    columns: &'a [&'a [f64]],
    labels: &'a [Label],
    mtry: usize,
    min_leaf: usize,
    rng: R,
    nodes: Vec<Node>,
}

impl<R: Rng> Grower<'_, R> {
    fn grow(&mut self, idx: Vec<usize>) -> usize {
        let counts = class_counts(self.labels, &idx);
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf { counts });
        if counts[0] == 0 || counts[1] == 0 || idx.len() < 2 * self.min_leaf {
            return at;
        }
        let p = self.columns.len();
        let mut candidates = index::sample(&mut self.rng, p, self.mtry).into_vec();
        candidates.sort_unstable();

        let mut best: Option<(f64, usize, f64)> = None;
        for &f in &candidates {
            let col = self.columns[f];
            let mut order = idx.clone();
            order.sort_by(|&a, &b| col[a].total_cmp(&col[b]));
            let mut left = [0u32; 2];
            for pos in 0..order.len() - 1 {
                left[(self.labels[order[pos]] == MALIGNANT) as usize] += 1;
                let (lo, hi) = (col[order[pos]], col[order[pos + 1]]);
                let n_left = pos + 1;
                if lo == hi || n_left < self.min_leaf || order.len() - n_left < self.min_leaf {
                    continue;
                }
                let right = [counts[0] - left[0], counts[1] - left[1]];
                let score = weighted_gini(left) + weighted_gini(right);
                if best.is_none_or(|(s, _, _)| score < s) {
                    let mut threshold = lo + (hi - lo) / 2.0;
                    if threshold >= hi {
                        threshold = lo;
                    }
                    best = Some((score, f, threshold));
                }
            }
        }
        let Some((_, feature, threshold)) = best else {
            return at;
        };
        let col = self.columns[feature];
        let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| col[i] <= threshold);
        let left = self.grow(l);
        let right = self.grow(r);
        self.nodes[at] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        at
    }
}

/// Trains a bagged forest of Gini trees.
///
/// Each tree draws a bootstrap sample and considers ⌈√p⌉ random columns at
/// every node. Tree `t` uses its own RNG stream derived from `(seed, t)`,
/// so the model is identical whatever the thread count.
pub fn rf_train(m: &FeatureMatrix, params: &RandomForestParams) -> Result<ForestModel> {
    let labels = m.require_labels()?;
    if !labels.contains(&MALIGNANT) || !labels.iter().any(|&l| l != MALIGNANT) {
        return Err(Error::SingleClass);
    }
    if params.n_estimators == 0 {
        return Err(Error::InvalidInput(
            "n_estimators must be at least 1".into(),
        ));
    }
    if params.min_samples_leaf == 0 {
        return Err(Error::InvalidInput(
            "min_samples_leaf must be at least 1".into(),
        ));
    }
    let n = m.n_samples();
    let p = m.n_features();
    if p == 0 {
        return Err(Error::InvalidInput("feature matrix has no columns".into()));
    }
    let mtry = (p as f64).sqrt().ceil() as usize;
    let columns: Vec<&[f64]> = (0..p).map(|j| m.column(j)).collect();
    let trees = (0..params.n_estimators)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(params.seed, &[t as u64]);
            let bootstrap: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            let mut g = Grower {
                columns: &columns,
                labels,
                mtry: mtry.min(p),
                min_leaf: params.min_samples_leaf,
                rng,
                nodes: Vec::new(),
            };
            g.grow(bootstrap);
            Tree { nodes: g.nodes }
        })
        .collect();
    Ok(ForestModel {
        schema_version: FOREST_SCHEMA_VERSION,
        n_estimators: params.n_estimators,
        seed: params.seed,
        min_samples_leaf: params.min_samples_leaf,
        feature_names: m.columns().to_vec(),
        trees,
    })
}

/// Mean over trees of the positive-class fraction in the reached leaf.
pub fn rf_predict_proba(model: &ForestModel, m: &FeatureMatrix) -> Result<Vec<f64>> {
    let cols: Vec<&[f64]> = model
        .feature_names
        .iter()
        .map(|name| {
            m.column_by_name(name)
                .ok_or_else(|| Error::MissingFeature(name.clone()))
        })
        .collect::<Result<_>>()?;
    let n_trees = model.trees.len() as f64;
    Ok((0..m.n_samples())
        .into_par_iter()
        .map(|i| {
            let row: Vec<f64> = cols.iter().map(|c| c[i]).collect();
            model.trees.iter().map(|t| t.predict_row(&row)).sum::<f64>() / n_trees
        })
        .collect())
}

impl Classifier for RandomForestParams {
    type Model = ForestModel;

    fn fit(&self, m: &FeatureMatrix, seed: u64) -> Result<ForestModel> {
        rf_train(m, &RandomForestParams { seed, ..*self })
    }

    fn predict_proba(&self, model: &ForestModel, m: &FeatureMatrix) -> Result<Vec<f64>> {
        rf_predict_proba(model, m)
    }
}
