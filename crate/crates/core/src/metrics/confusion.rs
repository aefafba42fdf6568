use serde::{Deserialize, Serialize};

use super::error::MetricsError;
use crate::herd::{DiseaseLabel, NUM_CLASSES};

/// Square count matrix; rows are true classes, columns predicted classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    classes: usize,
    counts: Vec<u64>,
}

/// Precision, recall and F1 of one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub support: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Support-weighted averages plus the number of undefined ratios that were set to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub zero_division: usize,
}

pub fn confusion(truth: &[usize], predicted: &[usize], classes: usize) -> Result<ConfusionMatrix, MetricsError> {
    if truth.len() != predicted.len() {
        return Err(MetricsError::LengthMismatch { left: truth.len(), right: predicted.len() });
    }
    if truth.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut cm = ConfusionMatrix::zeros(classes);
    for (&t, &p) in truth.iter().zip(predicted) {
        for index in [t, p] {
            if index >= classes {
                return Err(MetricsError::LabelOutOfRange { index, classes });
            }
        }
        cm.counts[t * classes + p] += 1;
    }
    Ok(cm)
}

pub fn confusion_labels(truth: &[DiseaseLabel], predicted: &[DiseaseLabel]) -> Result<ConfusionMatrix, MetricsError> {
    let t: Vec<usize> = truth.iter().map(|l| l.index()).collect();
    let p: Vec<usize> = predicted.iter().map(|l| l.index()).collect();
    confusion(&t, &p, NUM_CLASSES)
}

fn ratio(num: u64, den: u64, zero_division: &mut usize) -> f64 {
    if den == 0 {
        *zero_division += 1;
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl ConfusionMatrix {
    pub fn zeros(classes: usize) -> Self {
        Self { classes, counts: vec![0; classes * classes] }
    }

    pub fn from_counts(classes: usize, counts: Vec<u64>) -> Result<Self, MetricsError> {
        if counts.len() != classes * classes {
            return Err(MetricsError::DimensionMismatch { expected: classes * classes, found: counts.len() });
        }
        Ok(Self { classes, counts })
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.classes + predicted]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes).map(|k| self.get(k, k)).sum()
    }

    pub fn support(&self, class: usize) -> u64 {
        (0..self.classes).map(|p| self.get(class, p)).sum()
    }

    pub fn predicted_count(&self, class: usize) -> u64 {
        (0..self.classes).map(|t| self.get(t, class)).sum()
    }

    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            self.trace() as f64 / total as f64
        }
    }

    /// Per-class scores with zero for undefined ratios; the second value counts those.
    pub fn class_scores(&self) -> (Vec<ClassScores>, usize) {
        let mut zero_division = 0;
        let scores = (0..self.classes)
            .map(|k| {
                let tp = self.get(k, k);
                let support = self.support(k);
                let precision = ratio(tp, self.predicted_count(k), &mut zero_division);
                let recall = ratio(tp, support, &mut zero_division);
                let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
                ClassScores { support, precision, recall, f1 }
            })
            .collect();
        (scores, zero_division)
    }

    pub fn weighted(&self) -> WeightedScores {
        let (scores, zero_division) = self.class_scores();
        let total = self.total() as f64;
        let avg = |f: fn(&ClassScores) -> f64| -> f64 {
            if total == 0.0 {
                return 0.0;
            }
            scores.iter().map(|s| s.support as f64 * f(s)).sum::<f64>() / total
        };
        WeightedScores { precision: avg(|s| s.precision), recall: avg(|s| s.recall), f1: avg(|s| s.f1), zero_division }
    }
}
