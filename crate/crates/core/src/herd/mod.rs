//! Cow-day records: the 13-class label space, the 30-feature vector, datasets,
//! CSV persistence and stratified splitting.

mod dataset;
mod error;
mod features;
mod label;
mod split;

pub use dataset::{row_cow_id, Dataset, LabeledExample, REFERENCE_DAY};
pub use error::HerdError;
pub use features::{
    idx, FeatureRange, FeatureVector, Severity, Validation, Violation, ViolationKind, FEATURE_NAMES, FEATURE_RANGES,
    NUM_FEATURES,
};
pub use label::{DiseaseLabel, UnknownLabel, NUM_CLASSES};
pub use split::{stratified_folds, stratified_split, train_count, SplitSpec};
