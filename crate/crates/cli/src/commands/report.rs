use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use radiocorr_core::xaicorr::ExplainReport;
use radiocorr_core::{Error, Result};
use serde_json::Value;

use super::read_json;
use crate::output::write_atomic;

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// JSON written by `explain`.
    #[arg(long)]
    pub explain: Option<PathBuf>,
    /// JSON written by `train`.
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    /// Number of feature groups to list.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Markdown file to write (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn fmt_summary(v: &Value) -> String {
    match (
        v.get("mean").and_then(Value::as_f64),
        v.get("std").and_then(Value::as_f64),
    ) {
        (Some(m), Some(s)) => format!("{:.2} ± {:.2}", 100.0 * m, 100.0 * s),
        _ => "n/a".into(),
    }
}

pub fn report(a: &ReportArgs) -> Result<()> {
    if a.explain.is_none() && a.metrics.is_none() {
        return Err(Error::InvalidInput(
            "give --explain and/or --metrics".into(),
        ));
    }
    let mut md = String::new();
    if let Some(path) = &a.metrics {
        let v: Value = read_json(path)?;
        let pooled = &v["pooled"];
        let _ = writeln!(md, "## Cross-validation\n");
        let _ = writeln!(md, "| Acc | AUROC | Sens | Spec | PPV | NPV |");
        let _ = writeln!(md, "|---|---|---|---|---|---|");
        let cells: Vec<String> = [
            "accuracy",
            "auroc",
            "sensitivity",
            "specificity",
            "ppv",
            "npv",
        ]
        .iter()
        .map(|k| fmt_summary(&pooled[*k]))
        .collect();
        let _ = writeln!(md, "| {} |\n", cells.join(" | "));
    }
    if let Some(path) = &a.explain {
        let r: ExplainReport = read_json(path)?;
        let _ = writeln!(
            md,
            "## Deep features explained per radiomic feature ({} mode)\n",
            r.mode
        );
        let header: Vec<String> = r.thresholds.iter().map(|m| format!("ρ ≥ {m:.2}")).collect();
        let _ = writeln!(md, "| Feature | {} |", header.join(" | "));
        let _ = writeln!(md, "|---|{}", "---|".repeat(r.thresholds.len()));
        for g in r.grouped.iter().take(a.top) {
            let counts: Vec<String> = g.counts.iter().map(usize::to_string).collect();
            let _ = writeln!(md, "| {} | {} |", g.base, counts.join(" | "));
        }
        let _ = writeln!(
            md,
            "\n{} samples, {} radiomic × {} deep features, {} undefined pairs.",
            r.n_samples, r.n_radiomic, r.n_deep, r.undefined_pairs
        );
    }
    match &a.out {
        Some(path) => write_atomic(path, md.as_bytes()),
        None => {
            print!("{md}");
            Ok(())
        }
    }
}
