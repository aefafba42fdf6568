//! Class-conditional feature distributions: a healthy baseline per feature plus
//! a per-disease offset, read from a versioned CSV table.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::herd::{DiseaseLabel, FEATURE_NAMES, NUM_CLASSES, NUM_FEATURES};

pub const TABLE_HEADER: &str = "#signature-table v1";
const DEFAULT_TABLE: &str = include_str!("../../data/default_signatures.csv");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("bad signature table: {0}")]
pub struct BadSignatureTable(pub String);

/// `offset_*[k][j]` is class `k`'s shift of feature `j`; row 0 (Healthy) is all zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureTable {
    pub healthy_mean: [f64; NUM_FEATURES],
    pub healthy_sd: [f64; NUM_FEATURES],
    pub offset_mean: [[f64; NUM_FEATURES]; NUM_CLASSES],
    pub offset_sd: [[f64; NUM_FEATURES]; NUM_CLASSES],
}

impl Default for SignatureTable {
    fn default() -> Self {
        Self::parse(DEFAULT_TABLE).expect("shipped signature table is valid")
    }
}

fn diseases() -> impl Iterator<Item = DiseaseLabel> {
    DiseaseLabel::ALL.into_iter().skip(1)
}

impl SignatureTable {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, BadSignatureTable> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| BadSignatureTable(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Column layout: `feature, healthy_mean, healthy_sd`, then `<Disease>_mean, <Disease>_sd`
    /// for every disease in label order; one row per feature in canonical order.
    pub fn parse(text: &str) -> Result<Self, BadSignatureTable> {
        let bad = |m: String| BadSignatureTable(m);
        let (first, body) = text.split_once('\n').unwrap_or((text, ""));
        if first.trim_end() != TABLE_HEADER {
            return Err(bad(format!("first line must be {TABLE_HEADER:?}")));
        }
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
        let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
        let mut expected = vec!["feature".to_string(), "healthy_mean".into(), "healthy_sd".into()];
        for d in diseases() {
            expected.push(format!("{}_mean", d.name()));
            expected.push(format!("{}_sd", d.name()));
        }
        if header.iter().ne(expected.iter().map(String::as_str)) {
            return Err(bad(format!("column header must be {}", expected.join(","))));
        }

        let mut t = SignatureTable {
            healthy_mean: [0.0; NUM_FEATURES],
            healthy_sd: [0.0; NUM_FEATURES],
            offset_mean: [[0.0; NUM_FEATURES]; NUM_CLASSES],
            offset_sd: [[0.0; NUM_FEATURES]; NUM_CLASSES],
        };
        let mut rows = 0;
        for (j, record) in reader.records().enumerate() {
            let record = record.map_err(|e| bad(e.to_string()))?;
            if j >= NUM_FEATURES {
                return Err(bad(format!("more than {NUM_FEATURES} feature rows")));
            }
            if &record[0] != FEATURE_NAMES[j] {
                return Err(bad(format!("row {} must be feature {}, found {}", j + 1, FEATURE_NAMES[j], &record[0])));
            }
            let num = |col: usize| -> Result<f64, BadSignatureTable> {
                let v: f64 = record[col].parse().map_err(|_| bad(format!("{}: non-numeric {:?}", FEATURE_NAMES[j], &record[col])))?;
                if !v.is_finite() {
                    return Err(bad(format!("{}: non-finite value", FEATURE_NAMES[j])));
                }
                Ok(v)
            };
            t.healthy_mean[j] = num(1)?;
            t.healthy_sd[j] = num(2)?;
            for (n, d) in diseases().enumerate() {
                t.offset_mean[d.index()][j] = num(3 + 2 * n)?;
                t.offset_sd[d.index()][j] = num(4 + 2 * n)?;
            }
            rows += 1;
        }
        if rows != NUM_FEATURES {
            return Err(bad(format!("expected {NUM_FEATURES} feature rows, found {rows}")));
        }
        t.check()?;
        Ok(t)
    }

    pub fn check(&self) -> Result<(), BadSignatureTable> {
        for j in 0..NUM_FEATURES {
            let sds = std::iter::once(self.healthy_sd[j]).chain((0..NUM_CLASSES).map(|k| self.offset_sd[k][j]));
            if sds.into_iter().any(|s| !(s >= 0.0)) {
                return Err(BadSignatureTable(format!("{}: standard deviations must be non-negative", FEATURE_NAMES[j])));
            }
            if self.offset_mean[0][j] != 0.0 || self.offset_sd[0][j] != 0.0 {
                return Err(BadSignatureTable("healthy class carries no offset".into()));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(TABLE_HEADER);
        out.push('\n');
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["feature".to_string(), "healthy_mean".into(), "healthy_sd".into()];
        for d in diseases() {
            header.push(format!("{}_mean", d.name()));
            header.push(format!("{}_sd", d.name()));
        }
        w.write_record(&header).expect("in-memory write");
        for j in 0..NUM_FEATURES {
            let mut row = vec![FEATURE_NAMES[j].to_string(), format!("{:?}", self.healthy_mean[j]), format!("{:?}", self.healthy_sd[j])];
            for d in diseases() {
                row.push(format!("{:?}", self.offset_mean[d.index()][j]));
                row.push(format!("{:?}", self.offset_sd[d.index()][j]));
            }
            w.write_record(&row).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
        out
    }

    /// `(mean, sd)` of feature `j` for `label` at the given separability.
    pub fn distribution(&self, label: DiseaseLabel, j: usize, separability: f64) -> (f64, f64) {
        let k = label.index();
        let mean = self.healthy_mean[j] + separability * self.offset_mean[k][j];
        let o = separability * self.offset_sd[k][j];
        (mean, self.healthy_sd[j].hypot(o))
    }

    /// Same table with every standard deviation set to zero.
    pub fn noiseless(&self) -> Self {
        Self {
            healthy_sd: [0.0; NUM_FEATURES],
            offset_sd: [[0.0; NUM_FEATURES]; NUM_CLASSES],
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_round_trips_through_text() {
        let t = SignatureTable::default();
        assert_eq!(SignatureTable::parse(&t.to_csv()).unwrap(), t);
    }

    #[test]
    fn rejects_structural_problems() {
        let text = SignatureTable::default().to_csv();
        assert!(SignatureTable::parse(&text.replacen("v1", "v2", 1)).is_err());
        assert!(SignatureTable::parse(&text.replacen("lying_time_hrs", "lying", 1)).is_err());
        let truncated: String = text.lines().take(10).collect::<Vec<_>>().join("\n");
        assert!(SignatureTable::parse(&truncated).unwrap_err().0.contains("feature rows"));
        let mut t = SignatureTable::default();
        t.offset_sd[3][2] = -1.0;
        assert!(SignatureTable::parse(&t.to_csv()).is_err());
    }
}
