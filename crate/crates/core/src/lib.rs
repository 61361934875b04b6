//! Radiomic feature extraction, tabular learning, and correlation-based
//! explanation of deep features for 2D medical images.
//!
//! The modules build on each other:
//!
//! * [`imaging`] loads and prepares images and ROI masks.
//! * [`wavelet`] provides the single-level Haar decomposition.
//! * [`radiomics`] turns an image/mask pair into a named feature vector.
//! * [`tabular`] holds feature matrices, filters, rank statistics, CV
//!   schemes, and metrics.
//! * [`learn`] trains the reference random forest and runs forward
//!   feature selection.
//! * [`xaicorr`] correlates radiomic with deep features and summarizes the
//!   counts that pass a threshold.
//! * [`cam`] reconstructs class activation maps from exported tensors.

pub mod cam;
pub mod error;
pub mod imaging;
pub mod learn;
pub mod radiomics;
pub mod rng;
pub mod tabular;
pub mod wavelet;
pub mod xaicorr;

pub use error::{Error, Result};
