use std::path::Path;

use radiocorr_core::learn::{RandomForestParams, SfsParams};
use radiocorr_core::radiomics::ExtractionConfig;
use radiocorr_core::tabular::CvScheme;
use radiocorr_core::xaicorr::{Mode, DEFAULT_THRESHOLDS};
use radiocorr_core::{Error, Result};
use serde::{Deserialize, Serialize};

/// Settings shared by every subcommand, read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub extraction: ExtractionConfig,
    pub nzv_cutoff: f64,
    pub prune_threshold: f64,
    pub thresholds: Vec<f64>,
    pub mode: Mode,
    pub trend_points: usize,
    pub top_q: f64,
    pub cv: CvScheme,
    pub rf: RandomForestParams,
    pub sfs: SfsParams,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            extraction: ExtractionConfig::default(),
            nzv_cutoff: 0.005,
            prune_threshold: 0.9,
            thresholds: DEFAULT_THRESHOLDS.to_vec(),
            mode: Mode::Signed,
            trend_points: 101,
            top_q: 0.1,
            cv: CvScheme::default(),
            rf: RandomForestParams::default(),
            sfs: SfsParams::default(),
        }
    }
}

impl PipelineConfig {
    pub fn load(path: Option<&Path>, seed: Option<u64>) -> Result<Self> {
        let mut config = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::InvalidInput(format!("cannot read config {}: {e}", path.display()))
                })?;
                toml::from_str(&text).map_err(|e| {
                    Error::InvalidInput(format!("invalid config {}: {e}", path.display()))
                })?
            }
            None => Self::default(),
        };
        if let Some(seed) = seed {
            config.cv.seed = seed;
            config.rf.seed = seed;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.extraction.n_levels < 1 {
            return bad("extraction.n_levels must be at least 1".into());
        }
        if self.nzv_cutoff.is_nan() || self.nzv_cutoff < 0.0 {
            return bad(format!(
                "nzv_cutoff must be nonnegative, got {}",
                self.nzv_cutoff
            ));
        }
        if !(0.0..=1.0).contains(&self.prune_threshold) {
            return bad(format!(
                "prune_threshold must be in [0, 1], got {}",
                self.prune_threshold
            ));
        }
        if self.thresholds.is_empty() || self.thresholds.iter().any(|m| !(-1.0..=1.0).contains(m)) {
            return bad("thresholds must be a non-empty list of values in [-1, 1]".into());
        }
        if self.trend_points < 2 {
            return bad("trend_points must be at least 2".into());
        }
        if !(self.top_q > 0.0 && self.top_q <= 1.0) {
            return bad(format!("top_q must be in (0, 1], got {}", self.top_q));
        }
        self.cv.validate()?;
        if self.rf.n_estimators == 0 || self.rf.min_samples_leaf == 0 {
            return bad("rf.n_estimators and rf.min_samples_leaf must be at least 1".into());
        }
        if self.sfs.k_max == 0 {
            return bad("sfs.k_max must be at least 1".into());
        }
        Ok(())
    }
}
