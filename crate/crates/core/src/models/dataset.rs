//! Tabular dataset loading.
//!
//! Format: CSV with a header row; every column is a real-valued feature
//! except an optional integer column named `label`. Feature columns keep
//! their file order, so column 0 is the bias slot by convention.

use crate::error::{Result, ShapError};
use crate::rng::{domain, RngSeed};
use crate::types::FeatureVector;
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetTable {
    pub feature_names: Vec<String>,
    pub rows: Vec<FeatureVector>,
    pub labels: Option<Vec<i64>>,
}

impl DatasetTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn feature_count(&self) -> usize {
        self.feature_names.len()
    }

    pub fn row(&self, index: usize) -> Result<&FeatureVector> {
        self.rows.get(index).ok_or(ShapError::IndexOutOfRange {
            what: "dataset row",
            index,
            len: self.rows.len(),
        })
    }

    /// Parses CSV text. Rows must be rectangular; cells must parse as reals
    /// (or integers in the `label` column).
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| ShapError::Parse(format!("dataset header: {e}")))?
            .iter()
            .map(str::to_owned)
            .collect();
        if headers.is_empty() {
            return Err(ShapError::Parse("dataset has no header row".into()));
        }
        let label_col = headers.iter().position(|h| h == "label");
        let feature_names: Vec<String> = headers
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != label_col)
            .map(|(_, h)| h.clone())
            .collect();

        let mut rows = Vec::new();
        let mut labels = label_col.map(|_| Vec::new());
        for (r, record) in reader.records().enumerate() {
            // 1-based data row numbers; the header is row 0.
            let row_no = r + 1;
            let record =
                record.map_err(|e| ShapError::Parse(format!("row {row_no}: {e}")))?;
            let mut features = Vec::with_capacity(feature_names.len());
            for (c, cell) in record.iter().enumerate() {
                if Some(c) == label_col {
                    let v: i64 = cell.trim().parse().map_err(|_| {
                        ShapError::Parse(format!(
                            "row {row_no}, column {c}: invalid label \"{cell}\""
                        ))
                    })?;
                    labels.as_mut().expect("label column known").push(v);
                } else {
                    let v: f64 = cell.trim().parse().map_err(|_| {
                        ShapError::Parse(format!(
                            "row {row_no}, column {c}: invalid real \"{cell}\""
                        ))
                    })?;
                    features.push(v);
                }
            }
            rows.push(FeatureVector::new(features)?);
        }
        if rows.is_empty() {
            return Err(ShapError::Parse("dataset has a header but no rows".into()));
        }
        Ok(Self {
            feature_names,
            rows,
            labels,
        })
    }

    /// Serializes back to the canonical CSV format (used by test fixtures).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.feature_names.join(","));
        if self.labels.is_some() {
            out.push_str(",label");
        }
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row.values().iter().map(|v| format!("{v}")).collect();
            out.push_str(&cells.join(","));
            if let Some(labels) = &self.labels {
                out.push_str(&format!(",{}", labels[i]));
            }
            out.push('\n');
        }
        out
    }

    /// Deterministic synthetic table: bias column fixed at 1.0, remaining
    /// features uniform on [0, 1). Column names x0..xn.
    pub fn synthetic(features: usize, rows: usize, seed: RngSeed) -> Self {
        assert!(features >= 1 && rows >= 1);
        let mut rng = seed.stream(domain::DATASET_GEN, 0, 0);
        let feature_names = (0..=features).map(|j| format!("x{j}")).collect();
        let rows = (0..rows)
            .map(|_| {
                let mut values = vec![1.0];
                values.extend((0..features).map(|_| rng.gen::<f64>()));
                FeatureVector::new(values).expect("synthetic rows are valid")
            })
            .collect();
        Self {
            feature_names,
            rows,
            labels: None,
        }
    }
}

/// Loads a dataset file from disk.
pub fn load_dataset(path: &std::path::Path) -> Result<DatasetTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ShapError::Parse(format!("{}: {e}", path.display())))?;
    DatasetTable::from_csv_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_features_and_label() {
        let table = DatasetTable::from_csv_str("x0,x1,label\n1,0.5,1\n").unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.feature_names, vec!["x0", "x1"]);
        assert_eq!(table.rows[0].values(), &[1.0, 0.5]);
        assert_eq!(table.labels.as_deref(), Some(&[1][..]));
    }

    #[test]
    fn label_column_is_optional() {
        let table = DatasetTable::from_csv_str("x0,x1\n1,2\n3,4\n").unwrap();
        assert!(table.labels.is_none());
        assert_eq!(table.len(), 2);
    }

    #[test]
    fn ragged_row_is_located() {
        let err = DatasetTable::from_csv_str("x0,x1,x2\n1,2\n").unwrap_err();
        assert!(err.to_string().contains("row 1"), "{err}");
    }

    #[test]
    fn bad_cell_is_located() {
        let err = DatasetTable::from_csv_str("x0,x1\n1,2\n3,oops\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 2") && msg.contains("column 1"), "{msg}");
    }

    #[test]
    fn header_only_is_an_error() {
        assert!(DatasetTable::from_csv_str("x0,x1\n").is_err());
    }

    #[test]
    fn csv_round_trip_preserves_rows() {
        let table = DatasetTable::synthetic(4, 6, RngSeed(2));
        let back = DatasetTable::from_csv_str(&table.to_csv()).unwrap();
        assert_eq!(table, back);
    }

    #[test]
    fn out_of_range_row_is_reported() {
        let table = DatasetTable::synthetic(2, 3, RngSeed(0));
        assert!(table.row(2).is_ok());
        assert!(table.row(3).is_err());
    }
}
