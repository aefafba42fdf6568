use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::error::HerdError;
use super::features::{FeatureVector, Validation, FEATURE_NAMES, NUM_FEATURES};
use super::label::{DiseaseLabel, NUM_CLASSES};

/// Day assigned to rows that carry no calendar information (CSV rows, simulated records).
pub const REFERENCE_DAY: NaiveDate = match NaiveDate::from_ymd_opt(2024, 1, 1) {
    Some(day) => day,
    None => panic!("valid reference day"),
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub cow_id: String,
    pub day: NaiveDate,
    pub features: FeatureVector,
    pub label: DiseaseLabel,
}

impl LabeledExample {
    pub fn new(cow_id: impl Into<String>, day: NaiveDate, features: FeatureVector, label: DiseaseLabel) -> Self {
        Self { cow_id: cow_id.into(), day, features, label }
    }

    pub fn validate(&self) -> Validation {
        self.features.validate()
    }
}

/// Identifier given to the `row`-th record of a dataset without identity columns.
pub fn row_cow_id(row: usize) -> String {
    format!("cow-{row:05}")
}

/// Ordered collection of labeled cow-days with unique `(cow_id, day)` keys.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Dataset {
    examples: Vec<LabeledExample>,
}

impl Dataset {
    pub fn new(examples: Vec<LabeledExample>) -> Result<Self, HerdError> {
        let mut seen = HashSet::with_capacity(examples.len());
        for example in &examples {
            if !seen.insert((example.cow_id.as_str(), example.day)) {
                return Err(HerdError::DuplicateKey { cow_id: example.cow_id.clone(), day: example.day });
            }
        }
        Ok(Self { examples })
    }

    /// Builds a dataset from bare `(features, label)` pairs using row-indexed identities.
    pub fn from_rows(rows: impl IntoIterator<Item = (FeatureVector, DiseaseLabel)>) -> Self {
        let examples = rows
            .into_iter()
            .enumerate()
            .map(|(i, (features, label))| LabeledExample::new(row_cow_id(i), REFERENCE_DAY, features, label))
            .collect();
        Self { examples }
    }

    pub fn examples(&self) -> &[LabeledExample] {
        &self.examples
    }

    pub fn into_examples(self) -> Vec<LabeledExample> {
        self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LabeledExample> {
        self.examples.iter()
    }

    pub fn labels(&self) -> Vec<DiseaseLabel> {
        self.examples.iter().map(|e| e.label).collect()
    }

    pub fn feature_rows(&self) -> Vec<Vec<f64>> {
        self.examples.iter().map(|e| e.features.0.to_vec()).collect()
    }

    pub fn class_counts(&self) -> [usize; NUM_CLASSES] {
        let mut counts = [0; NUM_CLASSES];
        for example in &self.examples {
            counts[example.label.index()] += 1;
        }
        counts
    }

    /// Keeps the examples at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset { examples: indices.iter().map(|&i| self.examples[i].clone()).collect() }
    }

    pub fn with_labels(&self, labels: &[DiseaseLabel]) -> Dataset {
        assert_eq!(labels.len(), self.examples.len());
        let examples = self
            .examples
            .iter()
            .zip(labels)
            .map(|(e, &label)| LabeledExample { label, ..e.clone() })
            .collect();
        Dataset { examples }
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self, HerdError> {
        let file = std::fs::File::open(path.as_ref())?;
        Self::read_csv(file)
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<(), HerdError> {
        let file = std::fs::File::create(path.as_ref())?;
        self.write_csv(file)
    }

    /// Reads the canonical CSV: the 30 feature names then `label` as header row.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self, HerdError> {
        let mut csv = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(reader);
        let mut records = csv.records();

        let header = match records.next() {
            Some(record) => record?,
            None => return Err(HerdError::HeaderMismatch { line: 1, detail: "empty file".into() }),
        };
        check_header(&header)?;

        let mut examples = Vec::new();
        for record in records {
            let record = record?;
            let line = record.position().map(|p| p.line() as usize).unwrap_or(examples.len() + 2);
            if record.len() != NUM_FEATURES + 1 {
                return Err(HerdError::RowArity { line, expected: NUM_FEATURES + 1, found: record.len() });
            }
            let mut features = FeatureVector::zeros();
            for (i, cell) in record.iter().take(NUM_FEATURES).enumerate() {
                features[i] = cell.trim().parse::<f64>().map_err(|_| HerdError::NonNumericCell {
                    line,
                    column: FEATURE_NAMES[i].to_string(),
                    value: cell.to_string(),
                })?;
            }
            let raw_label = &record[NUM_FEATURES];
            let label = raw_label
                .trim()
                .parse::<DiseaseLabel>()
                .map_err(|_| HerdError::UnknownLabel { line, value: raw_label.to_string() })?;
            let row = examples.len();
            examples.push(LabeledExample::new(row_cow_id(row), REFERENCE_DAY, features, label));
        }
        Ok(Dataset { examples })
    }

    /// Writes values with shortest round-trip formatting, so reloading is exact.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), HerdError> {
        let mut csv = csv::Writer::from_writer(writer);
        let mut header: Vec<&str> = FEATURE_NAMES.to_vec();
        header.push("label");
        csv.write_record(&header)?;
        let mut row = Vec::with_capacity(NUM_FEATURES + 1);
        for example in &self.examples {
            row.clear();
            row.extend(example.features.0.iter().map(|v| format!("{v:?}")));
            row.push(example.label.name().to_string());
            csv.write_record(&row)?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_csv_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to memory cannot fail");
        out
    }
}

fn check_header(header: &csv::StringRecord) -> Result<(), HerdError> {
    let expected: Vec<&str> = FEATURE_NAMES.iter().copied().chain(std::iter::once("label")).collect();
    let found: Vec<&str> = header.iter().map(str::trim).collect();
    if found == expected {
        return Ok(());
    }
    let missing: Vec<&str> = expected.iter().filter(|name| !found.contains(name)).copied().collect();
    let unexpected: Vec<&str> = found.iter().filter(|name| !expected.contains(name)).copied().collect();
    let detail = if missing.is_empty() && unexpected.is_empty() {
        "columns out of canonical order".to_string()
    } else {
        format!("missing {missing:?}, unexpected {unexpected:?}")
    };
    Err(HerdError::HeaderMismatch { line: 1, detail })
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a LabeledExample;
    type IntoIter = std::slice::Iter<'a, LabeledExample>;

    fn into_iter(self) -> Self::IntoIter {
        self.examples.iter()
    }
}
