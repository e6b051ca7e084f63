use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::features::FeatureMatrix;
use super::XaiError;

/// Pearson's r. Returns `Ok(None)` when either input is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Option<f64>, XaiError> {
    if x.len() != y.len() {
        return Err(XaiError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(XaiError::InsufficientData);
    }
    if is_constant(x) || is_constant(y) {
        return Ok(None);
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    let denom = (sxx * syy).sqrt();
    if !(denom > 0.0) || !denom.is_finite() {
        return Ok(None);
    }
    Ok(Some((sxy / denom).clamp(-1.0, 1.0)))
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&x| x == v[0])
}

/// Labeled correlation matrix; `None` entries are undefined (a constant
/// column) and serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PccMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl PccMatrix {
    pub fn get(&self, row: &str, col: &str) -> Option<Option<f64>> {
        let i = self.row_labels.iter().position(|l| l == row)?;
        let j = self.col_labels.iter().position(|l| l == col)?;
        Some(self.values[i][j])
    }

    /// CSV with a leading `feature` label column. Values use the shortest
    /// representation that round-trips; undefined entries are empty cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("feature");
        for label in &self.col_labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        for (label, row) in self.row_labels.iter().zip(&self.values) {
            out.push_str(label);
            for value in row {
                out.push(',');
                if let Some(v) = value {
                    let _ = write!(out, "{v:?}");
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv<R: Read>(input: R) -> Result<Self, XaiError> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let bad = |e: csv::Error| XaiError::InvalidMatrix(e.to_string());
        let headers = reader.headers().map_err(bad)?.clone();
        let col_labels: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut row_labels = Vec::new();
        let mut values = Vec::new();
        for record in reader.records() {
            let record = record.map_err(bad)?;
            row_labels.push(record.get(0).unwrap_or_default().to_string());
            let row = record
                .iter()
                .skip(1)
                .map(|cell| {
                    if cell.is_empty() {
                        Ok(None)
                    } else {
                        cell.parse::<f64>()
                            .map(Some)
                            .map_err(|_| XaiError::InvalidMatrix(format!("bad cell {cell:?}")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            values.push(row);
        }
        Ok(PccMatrix {
            row_labels,
            col_labels,
            values,
        })
    }
}

/// Correlate every feature of `group_a` (rows) against every feature of
/// `group_b` (columns), labels in request order.
pub fn pcc_matrix(
    m: &FeatureMatrix,
    group_a: &[impl AsRef<str>],
    group_b: &[impl AsRef<str>],
) -> Result<PccMatrix, XaiError> {
    let a_columns = columns_of(m, group_a)?;
    let b_columns = columns_of(m, group_b)?;
    let values = a_columns
        .iter()
        .map(|a| b_columns.iter().map(|b| pearson(a, b)).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    Ok(PccMatrix {
        row_labels: group_a.iter().map(|s| s.as_ref().to_string()).collect(),
        col_labels: group_b.iter().map(|s| s.as_ref().to_string()).collect(),
        values,
    })
}

fn columns_of(m: &FeatureMatrix, names: &[impl AsRef<str>]) -> Result<Vec<Vec<f64>>, XaiError> {
    names.iter().map(|name| m.column_by_name(name.as_ref())).collect()
}
