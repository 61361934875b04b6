//! Random-forest classifier, cross-validated model selection and sequential
//! forward feature selection.

mod forest;
mod select;

pub use forest::{
    rf_predict_proba, rf_train, ForestModel, Node, RandomForestParams, Tree, FOREST_SCHEMA_VERSION,
};
pub use select::{
    cv_accuracy, cv_select_best, sfs_select, CvOutcome, FoldResult, SelectionReport, SfsParams,
};

use crate::error::Result;
use crate::tabular::FeatureMatrix;

/// A trainable binary classifier producing positive-class probabilities.
pub trait Classifier: Sync {
    type Model: Send + Sync;

    /// Trains on a labeled matrix. `seed` drives all randomness.
    fn fit(&self, m: &FeatureMatrix, seed: u64) -> Result<Self::Model>;

    /// Looks up the model's columns in `m` by name.
    fn predict_proba(&self, model: &Self::Model, m: &FeatureMatrix) -> Result<Vec<f64>>;
}
