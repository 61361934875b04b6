use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{correlation_trend, group_by_base, threshold_counts, CorrelationMatrix, Mode};
use crate::error::{Error, Result};
use crate::radiomics::FeatureDescriptor;
use crate::tabular::format_value;

pub const EXPLAIN_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureCounts {
    pub name: String,
    pub base: String,
    pub category: String,
    pub source: String,
    pub counts: Vec<usize>,
    pub undefined: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCounts {
    pub base: String,
    pub counts: Vec<usize>,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    #[serde(rename = "M")]
    pub m: f64,
    pub total: usize,
}

/// Everything the explain step emits, in serializable form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainReport {
    pub schema_version: u32,
    pub provenance: Option<String>,
    pub mode: Mode,
    pub thresholds: Vec<f64>,
    pub n_samples: usize,
    pub n_radiomic: usize,
    pub n_deep: usize,
    pub per_feature: Vec<FeatureCounts>,
    pub grouped: Vec<GroupCounts>,
    pub trend: Vec<TrendPoint>,
    pub undefined_pairs: usize,
}

impl ExplainReport {
    pub fn build(
        cm: &CorrelationMatrix,
        thresholds: &[f64],
        mode: Mode,
        grid: &[f64],
    ) -> Result<Self> {
        let tr = threshold_counts(cm, thresholds, mode)?;
        let grouped = group_by_base(&tr)?;
        let per_feature = tr
            .names
            .iter()
            .zip(tr.counts)
            .zip(tr.undefined)
            .map(|((name, counts), undefined)| {
                let d = FeatureDescriptor::parse(name)
                    .map_err(|_| Error::UnresolvableName(name.clone()))?;
                Ok(FeatureCounts {
                    name: name.clone(),
                    base: format!("{}_{}", d.category, d.base_name),
                    category: d.category.to_string(),
                    source: d.source.to_string(),
                    counts,
                    undefined,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            schema_version: EXPLAIN_SCHEMA_VERSION,
            provenance: cm.provenance().map(str::to_string),
            mode,
            thresholds: tr.thresholds,
            n_samples: cm.n_samples(),
            n_radiomic: cm.radiomic_names().len(),
            n_deep: cm.deep_names().len(),
            per_feature,
            grouped: grouped
                .groups
                .into_iter()
                .map(|g| GroupCounts {
                    base: g.base,
                    counts: g.counts,
                    members: g.members,
                })
                .collect(),
            trend: correlation_trend(cm, grid, mode)?,
            undefined_pairs: cm.undefined_pairs(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Long-format CSV: `kind,name,source,threshold,count` with one row per
    /// feature/threshold, group/threshold and trend point.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["kind", "name", "source", "threshold", "count"])?;
        for f in &self.per_feature {
            for (m, c) in self.thresholds.iter().zip(&f.counts) {
                w.write_record([
                    "feature",
                    &f.name,
                    &f.source,
                    &format_value(*m),
                    &c.to_string(),
                ])?;
            }
        }
        for g in &self.grouped {
            for (m, c) in self.thresholds.iter().zip(&g.counts) {
                w.write_record(["group", &g.base, "all", &format_value(*m), &c.to_string()])?;
            }
        }
        for t in &self.trend {
            w.write_record(["trend", "", "", &format_value(t.m), &t.total.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}
