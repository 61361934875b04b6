#![allow(dead_code)]

pub mod oracle;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_radiocorr"))
}

pub fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/synthetic")
}

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn radiocorr")
}

pub fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "radiocorr {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Runs extract → preprocess → select → train → explain on the bundled
/// fixture, writing into `dir`. Returns the output file names.
pub fn pipeline(dir: &Path, seed: &str) -> Vec<&'static str> {
    let fx = fixture();
    let config = fx.join("config.toml");
    let base = ["--config", s(&config), "--seed", seed];
    let p = |name: &str| dir.join(name);
    let with = |extra: &[&str]| {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(extra);
        run_ok(&args);
    };
    with(&[
        "extract",
        "--manifest",
        s(&fx.join("manifest.csv")),
        "--out",
        s(&p("features.csv")),
    ]);
    with(&[
        "preprocess",
        "--input",
        s(&p("features.csv")),
        "--out",
        s(&p("filtered.csv")),
        "--provenance",
        s(&p("provenance.json")),
    ]);
    with(&[
        "select",
        "--input",
        s(&p("filtered.csv")),
        "--out",
        s(&p("selection.json")),
    ]);
    with(&[
        "train",
        "--input",
        s(&p("filtered.csv")),
        "--selection",
        s(&p("selection.json")),
        "--model-out",
        s(&p("model.json")),
        "--report-out",
        s(&p("metrics.json")),
    ]);
    with(&[
        "explain",
        "--radiomic",
        s(&p("features.csv")),
        "--deep",
        s(&fx.join("deep.csv")),
        "--provenance",
        "fixture",
        "--out-json",
        s(&p("explain.json")),
        "--out-csv",
        s(&p("explain.csv")),
    ]);
    vec![
        "features.csv",
        "filtered.csv",
        "provenance.json",
        "selection.json",
        "model.json",
        "metrics.json",
        "explain.json",
        "explain.csv",
    ]
}

pub fn validate_schema(schema_file: &str, instance: &serde_json::Value) -> Result<(), String> {
    let path = repo_root().join("docs/schemas").join(schema_file);
    let schema: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    let errors: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| e.to_string())
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors.join("; "))
    }
}
