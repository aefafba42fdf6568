use chrono::NaiveDate;

use super::label::DiseaseLabel;

#[derive(Debug, thiserror::Error)]
pub enum HerdError {
    #[error("line {line}: header mismatch ({detail})")]
    HeaderMismatch { line: usize, detail: String },
    #[error("line {line}: expected {expected} cells, found {found}")]
    RowArity { line: usize, expected: usize, found: usize },
    #[error("line {line}: unknown label {value:?}")]
    UnknownLabel { line: usize, value: String },
    #[error("line {line}: non-numeric value {value:?} in column {column}")]
    NonNumericCell { line: usize, column: String, value: String },
    #[error("duplicate example key ({cow_id}, {day})")]
    DuplicateKey { cow_id: String, day: NaiveDate },
    #[error("class {label} has too few examples ({count})")]
    ClassTooSmall { label: DiseaseLabel, count: usize },
    #[error("train fraction {0} outside (0, 1)")]
    BadFraction(f64),
    #[error("dataset has no examples")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
