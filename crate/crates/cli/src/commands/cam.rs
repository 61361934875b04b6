use std::path::PathBuf;

use clap::{Args, ValueEnum};
use radiocorr_core::cam::{
    eigen_cam, grad_cam, map_discrepancy, read_atns_path, read_cic_weights_path, score_cam,
    upsample_bilinear, write_saliency, SaliencyMap,
};
use radiocorr_core::{Error, Result};
use serde_json::json;

use super::REPORT_SCHEMA_VERSION;
use crate::output::write_atomic;
use crate::Globals;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Grad,
    Score,
    Eigen,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Grad => "gradcam",
            Method::Score => "scorecam",
            Method::Eigen => "eigencam",
        }
    }
}

#[derive(Debug, Args)]
pub struct CamArgs {
    /// Activation stack (ATNS file).
    #[arg(long)]
    pub activations: PathBuf,
    /// Gradient stack for Grad-CAM (ATNS file).
    #[arg(long)]
    pub gradients: Option<PathBuf>,
    /// Per-channel Score-CAM weights, one per line.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Methods to run; repeat or separate with commas.
    #[arg(long = "method", value_enum, value_delimiter = ',', required = true)]
    pub methods: Vec<Method>,
    /// Apply a softmax to the Score-CAM weights.
    #[arg(long)]
    pub softmax: bool,
    /// Resize maps to HEIGHTxWIDTH.
    #[arg(long, value_parser = parse_size)]
    pub resize: Option<(usize, usize)>,
    /// Free-text layer name recorded in the discrepancy report.
    #[arg(long)]
    pub layer: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out_dir: PathBuf,
}

fn parse_size(s: &str) -> std::result::Result<(usize, usize), String> {
    let (h, w) = s.split_once('x').ok_or("expected HEIGHTxWIDTH")?;
    let h: usize = h.parse().map_err(|_| format!("bad height '{h}'"))?;
    let w: usize = w.parse().map_err(|_| format!("bad width '{w}'"))?;
    if h == 0 || w == 0 {
        return Err("size must be positive".into());
    }
    Ok((h, w))
}

pub fn cam(g: &Globals, a: &CamArgs) -> Result<()> {
    let mut methods = a.methods.clone();
    methods.dedup();
    let acts = read_atns_path(&a.activations)?;
    let mut maps: Vec<(Method, SaliencyMap)> = Vec::new();
    for &method in &methods {
        let map =
            match method {
                Method::Grad => {
                    let path = a.gradients.as_ref().ok_or_else(|| {
                        Error::InvalidInput("grad method needs --gradients".into())
                    })?;
                    grad_cam(&acts, &read_atns_path(path)?)?
                }
                Method::Score => {
                    let path = a.weights.as_ref().ok_or_else(|| {
                        Error::InvalidInput("score method needs --weights".into())
                    })?;
                    score_cam(&acts, &read_cic_weights_path(path)?, a.softmax)?
                }
                Method::Eigen => eigen_cam(&acts),
            };
        let map = match a.resize {
            Some((h, w)) => upsample_bilinear(&map, h, w)?,
            None => map,
        };
        maps.push((method, map));
    }

    let mut pairs = Vec::new();
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            let d = map_discrepancy(&maps[i].1, &maps[j].1, g.config.top_q)?;
            pairs.push(json!({
                "a": maps[i].0.name(),
                "b": maps[j].0.name(),
                "pearson": d.pearson,
                "top_q_jaccard": d.top_q_jaccard,
            }));
        }
    }

    std::fs::create_dir_all(&a.out_dir).map_err(|e| Error::io(&a.out_dir, e))?;
    for (method, map) in &maps {
        write_saliency(map, &a.out_dir, method.name())?;
    }
    if maps.len() >= 2 {
        let report = json!({
            "schema_version": REPORT_SCHEMA_VERSION,
            "layer": a.layer,
            "top_q": g.config.top_q,
            "pairs": pairs,
        });
        write_atomic(
            &a.out_dir.join("discrepancy.json"),
            &crate::output::json_bytes(&report)?,
        )?;
    }
    Ok(())
}
