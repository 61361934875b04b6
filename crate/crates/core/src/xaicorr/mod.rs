//! Correlates radiomic features with deep features and summarizes how many
//! deep features each radiomic feature explains.

mod report;

pub use report::{ExplainReport, FeatureCounts, GroupCounts, TrendPoint, EXPLAIN_SCHEMA_VERSION};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radiomics::FeatureDescriptor;
use crate::tabular::{FeatureMatrix, RankedColumn};

pub const DEFAULT_THRESHOLDS: [f64; 4] = [0.30, 0.35, 0.40, 0.45];

/// How a correlation is compared with a threshold `M`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `ρ ≥ M`
    #[default]
    Signed,
    /// `|ρ| ≥ M`
    Absolute,
}

impl Mode {
    pub fn passes(self, rho: f64, m: f64) -> bool {
        match self {
            Mode::Signed => rho >= m,
            Mode::Absolute => rho.abs() >= m,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Signed => "signed",
            Mode::Absolute => "absolute",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "signed" => Ok(Mode::Signed),
            "absolute" => Ok(Mode::Absolute),
            other => Err(Error::InvalidInput(format!(
                "unknown mode '{other}' (signed|absolute)"
            ))),
        }
    }
}

/// Spearman correlations between every radiomic and deep column.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    rho: Vec<Option<f64>>,
    radiomic_names: Vec<String>,
    deep_names: Vec<String>,
    n_samples: usize,
    provenance: Option<String>,
}

impl CorrelationMatrix {
    pub fn from_parts(
        radiomic_names: Vec<String>,
        deep_names: Vec<String>,
        rho: Vec<Option<f64>>,
        n_samples: usize,
    ) -> Result<Self> {
        let expected = radiomic_names.len() * deep_names.len();
        if rho.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: rho.len(),
            });
        }
        if rho.iter().flatten().any(|r| !(-1.0..=1.0).contains(r)) {
            return Err(Error::InvalidInput("correlation outside [-1, 1]".into()));
        }
        Ok(Self {
            rho,
            radiomic_names,
            deep_names,
            n_samples,
            provenance: None,
        })
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.rho[i * self.deep_names.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Option<f64>] {
        let b = self.deep_names.len();
        &self.rho[i * b..(i + 1) * b]
    }

    pub fn radiomic_names(&self) -> &[String] {
        &self.radiomic_names
    }

    pub fn deep_names(&self) -> &[String] {
        &self.deep_names
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// Provenance string of the deep-feature matrix, kept verbatim.
    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn undefined_pairs(&self) -> usize {
        self.rho.iter().filter(|r| r.is_none()).count()
    }
}

/// Computes Spearman ρ for every (radiomic, deep) column pair.
///
/// Samples must carry the same ids in the same order in both matrices.
pub fn correlation_matrix(
    radiomic: &FeatureMatrix,
    deep: &FeatureMatrix,
) -> Result<CorrelationMatrix> {
    let (left, right) = (radiomic.sample_ids(), deep.sample_ids());
    for row in 0..left.len().max(right.len()) {
        let (l, r) = (left.get(row), right.get(row));
        if l != r {
            return Err(Error::SampleMismatch {
                row,
                left: l.cloned().unwrap_or_else(|| "<none>".into()),
                right: r.cloned().unwrap_or_else(|| "<none>".into()),
            });
        }
    }
    if left.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            found: left.len(),
        });
    }
    let rank = |m: &FeatureMatrix| -> Vec<RankedColumn> {
        (0..m.n_features())
            .into_par_iter()
            .map(|j| RankedColumn::new(m.column(j)))
            .collect()
    };
    let (ra, rd) = (rank(radiomic), rank(deep));
    let rho = ra
        .par_iter()
        .flat_map_iter(|a| rd.iter().map(move |d| a.correlation(d)))
        .collect();
    Ok(CorrelationMatrix {
        rho,
        radiomic_names: radiomic.columns().to_vec(),
        deep_names: deep.columns().to_vec(),
        n_samples: left.len(),
        provenance: deep.provenance().map(str::to_string),
    })
}

/// Per radiomic feature, the number of deep features passing each threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub thresholds: Vec<f64>,
    pub mode: Mode,
    pub names: Vec<String>,
    /// `counts[i][t]` for feature `i` and threshold `t`.
    pub counts: Vec<Vec<usize>>,
    /// Undefined correlations per feature; never counted.
    pub undefined: Vec<usize>,
}

fn check_thresholds(thresholds: &[f64]) -> Result<()> {
    if thresholds.is_empty() {
        return Err(Error::InvalidInput(
            "at least one threshold is required".into(),
        ));
    }
    if let Some(m) = thresholds.iter().find(|m| !(-1.0..=1.0).contains(*m)) {
        return Err(Error::InvalidInput(format!(
            "threshold {m} outside [-1, 1]"
        )));
    }
    Ok(())
}

pub fn threshold_counts(
    cm: &CorrelationMatrix,
    thresholds: &[f64],
    mode: Mode,
) -> Result<ThresholdReport> {
    check_thresholds(thresholds)?;
    let (counts, undefined) = (0..cm.radiomic_names.len())
        .map(|i| {
            let row = cm.row(i);
            let counts = thresholds
                .iter()
                .map(|&m| row.iter().flatten().filter(|&&r| mode.passes(r, m)).count())
                .collect();
            (counts, row.iter().filter(|r| r.is_none()).count())
        })
        .unzip();
    Ok(ThresholdReport {
        thresholds: thresholds.to_vec(),
        mode,
        names: cm.radiomic_names.clone(),
        counts,
        undefined,
    })
}

/// Counts summed over every source of one radiomic feature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    /// `category_BaseName`, e.g. `firstorder_Energy`.
    pub base: String,
    pub counts: Vec<usize>,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupedReport {
    pub thresholds: Vec<f64>,
    pub groups: Vec<Group>,
}

/// Sums counts over the original and wavelet variants of each feature.
///
/// Groups are ordered by descending count at the smallest threshold, then
/// by name.
pub fn group_by_base(tr: &ThresholdReport) -> Result<GroupedReport> {
    let mut by_base: BTreeMap<String, Group> = BTreeMap::new();
    for (name, counts) in tr.names.iter().zip(&tr.counts) {
        let d =
            FeatureDescriptor::parse(name).map_err(|_| Error::UnresolvableName(name.clone()))?;
        let base = format!("{}_{}", d.category, d.base_name);
        let group = by_base.entry(base.clone()).or_insert_with(|| Group {
            base,
            counts: vec![0; tr.thresholds.len()],
            members: Vec::new(),
        });
        for (total, c) in group.counts.iter_mut().zip(counts) {
            *total += c;
        }
        group.members.push(name.clone());
    }
    let lowest = (0..tr.thresholds.len())
        .min_by(|&a, &b| tr.thresholds[a].total_cmp(&tr.thresholds[b]))
        .unwrap_or(0);
    let mut groups: Vec<Group> = by_base.into_values().collect();
    groups.sort_by(|a, b| {
        b.counts
            .get(lowest)
            .cmp(&a.counts.get(lowest))
            .then_with(|| a.base.cmp(&b.base))
    });
    Ok(GroupedReport {
        thresholds: tr.thresholds.clone(),
        groups,
    })
}

/// `n` evenly spaced thresholds from 0 to 1 inclusive.
pub fn default_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// Total number of passing pairs at each grid point.
pub fn correlation_trend(
    cm: &CorrelationMatrix,
    grid: &[f64],
    mode: Mode,
) -> Result<Vec<TrendPoint>> {
    if grid
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        || grid.iter().any(|m| !m.is_finite())
    {
        return Err(Error::InvalidInput(
            "trend grid must be strictly increasing".into(),
        ));
    }
    let mut values: Vec<f64> = cm
        .rho
        .iter()
        .flatten()
        .map(|&r| match mode {
            Mode::Signed => r,
            Mode::Absolute => r.abs(),
        })
        .collect();
    values.sort_by(f64::total_cmp);
    Ok(grid
        .iter()
        .map(|&m| TrendPoint {
            m,
            total: values.len() - values.partition_point(|&v| v < m),
        })
        .collect())
}
