use serde::{Deserialize, Serialize};

use super::confusion::ConfusionMatrix;
use super::error::MetricsError;
use super::roc::{roc_curve, RocCurve};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub support: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// `None` when the class has no positives or no negatives in the evaluated set.
    pub auc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub precision_weighted: f64,
    pub recall_weighted: f64,
    pub f1_weighted: f64,
    /// Support-weighted one-vs-rest AUC over the classes where it is defined.
    pub roc_auc_weighted: Option<f64>,
    pub per_class: Vec<ClassReport>,
    pub roc_curves: Vec<Option<RocCurve>>,
    /// Precision/recall ratios with a zero denominator, reported as 0.
    pub zero_division_warnings: usize,
    pub confusion: ConfusionMatrix,
}

/// Full metric suite from a confusion matrix and the `N x K` score matrix behind it.
pub fn summarize<T: Scalar, R: AsRef<[T]>>(
    cm: &ConfusionMatrix,
    scores: &[R],
    truth: &[usize],
) -> Result<EvalReport, MetricsError> {
    let k = cm.classes();
    if scores.len() != truth.len() {
        return Err(MetricsError::LengthMismatch { left: scores.len(), right: truth.len() });
    }
    if cm.total() as usize != truth.len() {
        return Err(MetricsError::DimensionMismatch { expected: cm.total() as usize, found: truth.len() });
    }
    if let Some(row) = scores.iter().find(|r| r.as_ref().len() != k) {
        return Err(MetricsError::DimensionMismatch { expected: k, found: row.as_ref().len() });
    }
    if let Some(&index) = truth.iter().find(|&&t| t >= k) {
        return Err(MetricsError::LabelOutOfRange { index, classes: k });
    }

    let (class_scores, zero_division) = cm.class_scores();
    let weighted = cm.weighted();
    let mut per_class = Vec::with_capacity(k);
    let mut roc_curves = Vec::with_capacity(k);
    let (mut auc_mass, mut auc_weight) = (0.0, 0.0);
    let mut column = Vec::with_capacity(truth.len());
    for (class, cs) in class_scores.iter().enumerate() {
        column.clear();
        column.extend(scores.iter().map(|r| r.as_ref()[class]));
        let positives: Vec<bool> = truth.iter().map(|&t| t == class).collect();
        let curve = match roc_curve(&column, &positives) {
            Ok(curve) => Some(curve),
            Err(MetricsError::DegenerateClasses) => None,
            Err(e) => return Err(e),
        };
        let auc = curve.as_ref().map(RocCurve::auc);
        if let Some(a) = auc {
            auc_mass += cs.support as f64 * a;
            auc_weight += cs.support as f64;
        }
        per_class.push(ClassReport { support: cs.support, precision: cs.precision, recall: cs.recall, f1: cs.f1, auc });
        roc_curves.push(curve);
    }

    Ok(EvalReport {
        accuracy: cm.accuracy(),
        precision_weighted: weighted.precision,
        recall_weighted: weighted.recall,
        f1_weighted: weighted.f1,
        roc_auc_weighted: (auc_weight > 0.0).then(|| auc_mass / auc_weight),
        per_class,
        roc_curves,
        zero_division_warnings: zero_division,
        confusion: cm.clone(),
    })
}
