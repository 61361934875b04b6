mod cam;
mod report;

pub use cam::{cam, CamArgs};
pub use report::{report, ReportArgs};

use std::path::{Path, PathBuf};

use clap::Args;
use log::warn;
use radiocorr_core::imaging::{read_gray_png, read_mask_png};
use radiocorr_core::learn::{
    cv_select_best, rf_predict_proba, sfs_select, ForestModel, SelectionReport,
};
use radiocorr_core::radiomics::{extract_all, feature_dictionary, ExtractionConfig, FeatureVector};
use radiocorr_core::tabular::{
    correlation_prune, evaluate, format_value, near_zero_variance_filter, FeatureMatrix,
};
use radiocorr_core::xaicorr::{correlation_matrix, default_grid, ExplainReport, Mode};
use radiocorr_core::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::manifest::{Manifest, ManifestRow};
use crate::output::{commit, json_bytes};
use crate::Globals;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

fn csv_bytes(m: &FeatureMatrix) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    m.write_csv(&mut buf)?;
    Ok(buf)
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// CSV with columns sample_id,image_path,mask_path[,label].
    #[arg(long)]
    pub manifest: PathBuf,
    /// Feature CSV to write.
    #[arg(long)]
    pub out: PathBuf,
}

fn extract_one(row: &ManifestRow, config: &ExtractionConfig) -> Result<FeatureVector> {
    let image = read_gray_png(&row.image_path)?;
    let mask = read_mask_png(&row.mask_path)?;
    extract_all(&image, &mask, config)
}

fn missing_input(row: &ManifestRow) -> Option<Error> {
    [("image", &row.image_path), ("mask", &row.mask_path)]
        .into_iter()
        .find(|(_, p)| !p.is_file())
        .map(|(what, p)| {
            Error::InvalidInput(format!("{what} file {} does not exist", p.display()))
                .context(format!("sample '{}'", row.sample_id))
        })
}

pub fn extract(g: &Globals, a: &ExtractArgs) -> Result<()> {
    let manifest = Manifest::read(&a.manifest)?;
    let mut rows = Vec::new();
    for row in &manifest.rows {
        match missing_input(row) {
            Some(e) if g.skip_errors => warn!("skipping: {e}"),
            Some(e) => return Err(e),
            None => rows.push(row),
        }
    }
    let config = &g.config.extraction;
    let results: Vec<Result<FeatureVector>> = rows
        .par_iter()
        .map(|row| {
            extract_one(row, config).map_err(|e| e.context(format!("sample '{}'", row.sample_id)))
        })
        .collect();

    let (mut ids, mut labels, mut values) = (Vec::new(), Vec::new(), Vec::new());
    for (row, result) in rows.iter().zip(results) {
        match result {
            Ok(fv) => {
                ids.push(row.sample_id.clone());
                labels.extend(row.label);
                values.push(fv.values);
            }
            Err(e) if g.skip_errors => warn!("skipping: {e}"),
            Err(e) => return Err(e),
        }
    }
    if ids.is_empty() {
        return Err(Error::InvalidInput("no sample could be processed".into()));
    }
    let names = feature_dictionary(config)
        .into_iter()
        .map(|e| e.name)
        .collect();
    let labels = manifest.has_labels.then_some(labels);
    let m = FeatureMatrix::from_rows(ids, names, &values, labels)?;
    commit(vec![(&a.out, csv_bytes(&m)?)])
}

pub fn dictionary(g: &Globals, out: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "category", "source", "base_name", "formula"])?;
    for e in feature_dictionary(&g.config.extraction) {
        w.write_record([&e.name, &e.category, &e.source, &e.base_name, &e.formula])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    commit(vec![(out, bytes)])
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    /// Feature CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Filtered feature CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    /// JSON listing every dropped column and why.
    #[arg(long)]
    pub provenance: PathBuf,
}

#[derive(Debug, Serialize)]
struct DroppedColumn {
    feature: String,
    reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<f64>,
}

pub fn preprocess(g: &Globals, a: &PreprocessArgs) -> Result<()> {
    let m = FeatureMatrix::read_csv_path(&a.input)?;
    let nzv = near_zero_variance_filter(&m, g.config.nzv_cutoff)?;
    let pruned = correlation_prune(&nzv.matrix, g.config.prune_threshold)?;
    let mut dropped: Vec<DroppedColumn> = nzv
        .dropped
        .into_iter()
        .map(|feature| DroppedColumn {
            feature,
            reason: "nzv".into(),
            rho: None,
        })
        .collect();
    dropped.extend(pruned.dropped.into_iter().map(|d| DroppedColumn {
        feature: d.dropped,
        reason: format!("correlated_with:{}", d.correlated_with),
        rho: Some(d.rho),
    }));
    let provenance = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "nzv_cutoff": g.config.nzv_cutoff,
        "prune_threshold": g.config.prune_threshold,
        "n_input": m.n_features(),
        "n_kept": pruned.matrix.n_features(),
        "kept": pruned.matrix.columns(),
        "dropped": dropped,
    });
    commit(vec![
        (&a.out, csv_bytes(&pruned.matrix)?),
        (&a.provenance, json_bytes(&provenance)?),
    ])
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Labeled feature CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Selection report JSON to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the matrix restricted to the chosen columns.
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
}

pub fn select(g: &Globals, a: &SelectArgs) -> Result<()> {
    let m = FeatureMatrix::read_csv_path(&a.input)?;
    let c = &g.config;
    let report = sfs_select(&m, &c.rf, &c.cv, &c.sfs, c.rf.seed)?;
    let mut outputs = vec![(a.out.as_path(), json_bytes(&report)?)];
    if let Some(path) = &a.matrix_out {
        outputs.push((path.as_path(), csv_bytes(&m.select_named(&report.chosen)?)?));
    }
    commit(outputs)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::from(e).context(path.display().to_string()))
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Labeled feature CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Restrict to the columns chosen by `select`.
    #[arg(long)]
    pub selection: Option<PathBuf>,
    /// Forest model JSON to write.
    #[arg(long)]
    pub model_out: PathBuf,
    /// Cross-validation metrics JSON to write.
    #[arg(long)]
    pub report_out: PathBuf,
}

pub fn train(g: &Globals, a: &TrainArgs) -> Result<()> {
    let mut m = FeatureMatrix::read_csv_path(&a.input)?;
    if let Some(path) = &a.selection {
        let selection: SelectionReport = read_json(path)?;
        m = m.select_named(&selection.chosen)?;
    }
    let c = &g.config;
    let outcome = cv_select_best(&m, &c.rf, &c.cv, c.rf.seed)?;
    let best_accuracy = outcome
        .folds
        .iter()
        .find(|f| (f.repeat, f.fold) == (outcome.best_repeat, outcome.best_fold))
        .map(|f| f.metrics.accuracy);
    let report = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "features": m.columns(),
        "cv": c.cv,
        "rf": c.rf,
        "best": {
            "repeat": outcome.best_repeat,
            "fold": outcome.best_fold,
            "accuracy": best_accuracy,
        },
        "pooled": outcome.pooled,
        "folds": outcome.folds,
    });
    let mut model = outcome.model.to_json()?.into_bytes();
    model.push(b'\n');
    commit(vec![
        (&a.model_out, model),
        (&a.report_out, json_bytes(&report)?),
    ])
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Forest model JSON written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Feature CSV holding at least the model's columns.
    #[arg(long)]
    pub input: PathBuf,
    /// CSV of per-sample probabilities to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Metrics JSON to write when the input is labeled.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

pub fn predict(_g: &Globals, a: &PredictArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.model).map_err(|e| Error::io(&a.model, e))?;
    let model =
        ForestModel::from_json(&text).map_err(|e| e.context(a.model.display().to_string()))?;
    let m = FeatureMatrix::read_csv_path(&a.input)?;
    let p = rf_predict_proba(&model, &m)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let labels = m.labels();
    let mut header = vec!["sample_id", "probability"];
    if labels.is_some() {
        header.push("label");
    }
    w.write_record(&header)?;
    for (i, id) in m.sample_ids().iter().enumerate() {
        let mut rec = vec![id.clone(), format_value(p[i])];
        if let Some(l) = labels {
            rec.push(l[i].to_string());
        }
        w.write_record(&rec)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let mut outputs = vec![(a.out.as_path(), bytes)];
    if let Some(path) = &a.report {
        let metrics = evaluate(&p, m.require_labels()?)?;
        let report = json!({ "schema_version": REPORT_SCHEMA_VERSION, "metrics": metrics });
        outputs.push((path.as_path(), json_bytes(&report)?));
    }
    commit(outputs)
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    /// Radiomic feature CSV.
    #[arg(long)]
    pub radiomic: PathBuf,
    /// Deep feature CSV with the same sample ids in the same order.
    #[arg(long)]
    pub deep: PathBuf,
    /// Free-text origin of the deep features (e.g. layer name), stored verbatim.
    #[arg(long)]
    pub provenance: Option<String>,
    /// Overrides the configured comparison mode.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// JSON report to write.
    #[arg(long)]
    pub out_json: PathBuf,
    /// Long-format CSV report to write.
    #[arg(long)]
    pub out_csv: PathBuf,
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

pub fn explain(g: &Globals, a: &ExplainArgs) -> Result<()> {
    let radiomic = FeatureMatrix::read_csv_path(&a.radiomic)?;
    let mut deep = FeatureMatrix::read_csv_path(&a.deep)?;
    if let Some(p) = &a.provenance {
        deep = deep.with_provenance(p.clone());
    }
    let c = &g.config;
    let cm = correlation_matrix(&radiomic, &deep)?;
    let mode = a.mode.unwrap_or(c.mode);
    let report = ExplainReport::build(&cm, &c.thresholds, mode, &default_grid(c.trend_points))?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    commit(vec![
        (&a.out_json, report.to_json()?.into_bytes()),
        (&a.out_csv, csv),
    ])
}
