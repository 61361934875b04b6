use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Class label of a sample: 0 = benign, 1 = malignant.
pub type Label = u8;

pub const BENIGN: Label = 0;
pub const MALIGNANT: Label = 1;

/// Parses `0`/`1`/`benign`/`malignant` (case-insensitive).
pub fn parse_label(s: &str) -> Option<Label> {
    match s.trim().to_ascii_lowercase().as_str() {
        "0" | "benign" => Some(BENIGN),
        "1" | "malignant" => Some(MALIGNANT),
        _ => None,
    }
}

/// Samples × features table with unique column names and finite values.
///
/// Storage is column-major since nearly every consumer works per column.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    sample_ids: Vec<String>,
    columns: Vec<String>,
    data: Vec<Vec<f64>>,
    labels: Option<Vec<Label>>,
    provenance: Option<String>,
}

impl FeatureMatrix {
    /// Builds a matrix from per-column value vectors.
    pub fn from_columns(
        sample_ids: Vec<String>,
        columns: Vec<String>,
        data: Vec<Vec<f64>>,
        labels: Option<Vec<Label>>,
    ) -> Result<Self> {
        let n = sample_ids.len();
        if columns.len() != data.len() {
            return Err(Error::LengthMismatch {
                expected: columns.len(),
                found: data.len(),
            });
        }
        let mut seen = HashSet::new();
        for name in &columns {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        let mut ids = HashSet::new();
        for id in &sample_ids {
            if !ids.insert(id.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate sample id '{id}'")));
            }
        }
        for (name, col) in columns.iter().zip(&data) {
            if col.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: col.len(),
                });
            }
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    column: name.clone(),
                    sample: sample_ids[i].clone(),
                });
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: labels.len(),
                });
            }
            if let Some(bad) = labels.iter().find(|&&l| l > MALIGNANT) {
                return Err(Error::InvalidInput(format!("label {bad} is not 0 or 1")));
            }
        }
        Ok(Self {
            sample_ids,
            columns,
            data,
            labels,
            provenance: None,
        })
    }

    /// Builds a matrix from row-major rows.
    pub fn from_rows(
        sample_ids: Vec<String>,
        columns: Vec<String>,
        rows: &[Vec<f64>],
        labels: Option<Vec<Label>>,
    ) -> Result<Self> {
        if rows.len() != sample_ids.len() {
            return Err(Error::LengthMismatch {
                expected: sample_ids.len(),
                found: rows.len(),
            });
        }
        let p = columns.len();
        if let Some(row) = rows.iter().find(|r| r.len() != p) {
            return Err(Error::LengthMismatch {
                expected: p,
                found: row.len(),
            });
        }
        let data = (0..p)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        Self::from_columns(sample_ids, columns, data, labels)
    }

    pub fn n_samples(&self) -> usize {
        self.sample_ids.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j]
    }

    pub fn column_by_name(&self, name: &str) -> Option<&[f64]> {
        self.column_index(name).map(|j| self.column(j))
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    #[inline]
    pub fn value(&self, sample: usize, feature: usize) -> f64 {
        self.data[feature][sample]
    }

    pub fn row(&self, sample: usize) -> Vec<f64> {
        self.data.iter().map(|c| c[sample]).collect()
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    /// Labels, or [`Error::MissingLabels`].
    pub fn require_labels(&self) -> Result<&[Label]> {
        self.labels.as_deref().ok_or(Error::MissingLabels)
    }

    pub fn with_labels(mut self, labels: Option<Vec<Label>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.n_samples() {
                return Err(Error::LengthMismatch {
                    expected: self.n_samples(),
                    found: l.len(),
                });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    /// Free-form description of where the values came from (e.g. the
    /// network layer of a deep-feature matrix).
    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }

    /// Keeps the given columns, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Self {
        Self {
            sample_ids: self.sample_ids.clone(),
            columns: indices.iter().map(|&j| self.columns[j].clone()).collect(),
            data: indices.iter().map(|&j| self.data[j].clone()).collect(),
            labels: self.labels.clone(),
            provenance: self.provenance.clone(),
        }
    }

    /// Keeps the named columns, in the given order.
    pub fn select_named(&self, names: &[String]) -> Result<Self> {
        let idx = names
            .iter()
            .map(|n| {
                self.column_index(n)
                    .ok_or_else(|| Error::MissingFeature(n.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.select_columns(&idx))
    }

    /// Keeps the given samples, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self {
            sample_ids: indices
                .iter()
                .map(|&i| self.sample_ids[i].clone())
                .collect(),
            columns: self.columns.clone(),
            data: self
                .data
                .iter()
                .map(|c| indices.iter().map(|&i| c[i]).collect())
                .collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i]).collect()),
            provenance: self.provenance.clone(),
        }
    }

    /// Reads the CSV dialect: `sample_id`, optional `label`, then features.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.get(0).map(str::trim) != Some("sample_id") {
            return Err(Error::InvalidInput(
                "first CSV column must be 'sample_id'".into(),
            ));
        }
        let has_label = header.get(1).map(str::trim) == Some("label");
        let first = if has_label { 2 } else { 1 };
        let columns: Vec<String> = header
            .iter()
            .skip(first)
            .map(|s| s.trim().to_string())
            .collect();
        let mut ids = Vec::new();
        let mut labels = Vec::new();
        let mut data = vec![Vec::new(); columns.len()];
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            let id = record[0].trim().to_string();
            if has_label {
                let raw = &record[1];
                labels.push(parse_label(raw).ok_or_else(|| {
                    Error::InvalidInput(format!("sample '{id}': unrecognized label '{raw}'"))
                })?);
            }
            for (j, col) in data.iter_mut().enumerate() {
                let cell = record[first + j].trim();
                let v: f64 = cell.parse().map_err(|_| {
                    Error::InvalidInput(format!(
                        "row {}: column '{}' holds non-numeric value '{cell}'",
                        line + 2,
                        columns[j]
                    ))
                })?;
                col.push(v);
            }
            ids.push(id);
        }
        Self::from_columns(ids, columns, data, has_label.then_some(labels))
    }

    pub fn read_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(std::io::BufReader::new(file))
            .map_err(|e| e.context(format!("reading {}", path.display())))
    }

    /// Writes the CSV dialect. Values use Rust's shortest round-trip form.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec!["sample_id".to_string()];
        if self.labels.is_some() {
            header.push("label".into());
        }
        header.extend(self.columns.iter().cloned());
        wtr.write_record(&header)?;
        for i in 0..self.n_samples() {
            let mut rec = vec![self.sample_ids[i].clone()];
            if let Some(l) = &self.labels {
                rec.push(l[i].to_string());
            }
            rec.extend(self.data.iter().map(|c| format_value(c[i])));
            wtr.write_record(&rec)?;
        }
        wtr.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn write_csv_path(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        std::fs::write(path, buf).map_err(|e| Error::io(path, e))
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:?}")
}
