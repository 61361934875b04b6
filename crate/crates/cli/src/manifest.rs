use std::collections::HashSet;
use std::path::{Path, PathBuf};

use radiocorr_core::tabular::{parse_label, Label};
use radiocorr_core::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestRow {
    pub sample_id: String,
    pub image_path: PathBuf,
    pub mask_path: PathBuf,
    pub label: Option<Label>,
}

/// Dataset listing read from a CSV with header
/// `sample_id,image_path,mask_path[,label]`. Relative paths are resolved
/// against the manifest's directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub rows: Vec<ManifestRow>,
    pub has_labels: bool,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        let base = path.parent().unwrap_or(Path::new("."));
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut rdr = csv::Reader::from_reader(file);
        let header: Vec<String> = rdr
            .headers()?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let expected = ["sample_id", "image_path", "mask_path"];
        if header.len() < 3 || header[..3] != expected {
            return Err(Error::InvalidInput(format!(
                "{}: header must start with sample_id,image_path,mask_path",
                path.display()
            )));
        }
        let has_labels = match header.get(3).map(String::as_str) {
            Some("label") => true,
            None => false,
            Some(other) => {
                return Err(Error::InvalidInput(format!(
                    "{}: unexpected column '{other}'",
                    path.display()
                )))
            }
        };
        let mut seen = HashSet::new();
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let id = record[0].trim().to_string();
            if id.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "{}: empty sample_id",
                    path.display()
                )));
            }
            if !seen.insert(id.clone()) {
                return Err(Error::InvalidInput(format!(
                    "duplicate sample_id '{id}' in manifest"
                )));
            }
            let label = if has_labels {
                let raw = record.get(3).unwrap_or("").trim();
                Some(parse_label(raw).ok_or_else(|| {
                    Error::InvalidInput(format!("sample '{id}': unrecognized label '{raw}'"))
                })?)
            } else {
                None
            };
            rows.push(ManifestRow {
                image_path: base.join(record[1].trim()),
                mask_path: base.join(record[2].trim()),
                sample_id: id,
                label,
            });
        }
        if rows.is_empty() {
            return Err(Error::InvalidInput(format!(
                "{}: manifest lists no samples",
                path.display()
            )));
        }
        Ok(Self { rows, has_labels })
    }
}
