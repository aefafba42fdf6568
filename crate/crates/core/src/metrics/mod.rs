//! Confusion matrices, weighted precision/recall/F1, ROC curves and AUC, and the
//! training-fraction sweep.

mod confusion;
mod error;
mod report;
mod roc;
pub mod sweep;

pub use confusion::{confusion, confusion_labels, ClassScores, ConfusionMatrix, WeightedScores};
pub use error::MetricsError;
pub use report::{summarize, ClassReport, EvalReport};
pub use roc::{roc_auc, roc_curve, RocCurve};

use crate::classifier::{Classifier, DimensionMismatch};
use crate::herd::{Dataset, NUM_CLASSES};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvaluateError {
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Scores `model` on `data` and summarises the result.
pub fn evaluate(model: &dyn Classifier, data: &Dataset) -> Result<EvalReport, EvaluateError> {
    let rows = data.feature_rows();
    let scores = model.score_matrix(&rows)?;
    let predicted: Vec<usize> = scores.iter().map(|s| crate::classifier::argmax(s)).collect();
    let truth: Vec<usize> = data.iter().map(|e| e.label.index()).collect();
    let cm = confusion(&truth, &predicted, NUM_CLASSES)?;
    Ok(summarize(&cm, &scores, &truth)?)
}
