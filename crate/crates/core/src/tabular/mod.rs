//! Feature matrices, preprocessing filters, rank statistics, cross-validation
//! and evaluation metrics.

mod cv;
mod filter;
mod matrix;
mod metrics;
mod rank;

pub use cv::{stratified_folds, CvScheme, FoldAssignment};
pub use filter::{
    correlation_prune, near_zero_variance_filter, scaled_variance, NzvOutcome, PruneDrop,
    PruneOutcome,
};
pub use matrix::{format_value, parse_label, FeatureMatrix, Label, BENIGN, MALIGNANT};
pub use metrics::{auroc, evaluate, MetricsReport, PooledMetrics, Summary, DECISION_THRESHOLD};
pub use rank::{fractional_ranks, spearman, RankedColumn};
