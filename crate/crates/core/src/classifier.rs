//! Interface shared by the tuned SVM and every baseline.

use crate::herd::{DiseaseLabel, NUM_CLASSES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("dimension mismatch: expected {expected} features, found {found}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub found: usize,
}

/// Index of the largest score; ties go to the lowest index, NaN never wins.
pub fn argmax<T: PartialOrd + Copy>(scores: &[T]) -> usize {
    let is_nan = |v: &T| v.partial_cmp(v).is_none();
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s > scores[best] || (is_nan(&scores[best]) && !is_nan(s)) {
            best = i;
        }
    }
    best
}

/// A trained 13-class predictor producing one real score per class.
pub trait Classifier: Send + Sync {
    fn dim(&self) -> usize;

    fn scores(&self, x: &[f64]) -> Result<[f64; NUM_CLASSES], DimensionMismatch>;

    /// Argmax of [`Classifier::scores`], ties to the lowest class index.
    fn predict(&self, x: &[f64]) -> Result<DiseaseLabel, DimensionMismatch> {
        let scores = self.scores(x)?;
        Ok(DiseaseLabel::from_index(argmax(&scores)).expect("argmax within class range"))
    }

    fn score_matrix(&self, rows: &[Vec<f64>]) -> Result<Vec<[f64; NUM_CLASSES]>, DimensionMismatch> {
        rows.iter().map(|r| self.scores(r)).collect()
    }

    fn predict_all(&self, rows: &[Vec<f64>]) -> Result<Vec<DiseaseLabel>, DimensionMismatch> {
        rows.iter().map(|r| self.predict(r)).collect()
    }
}

pub(crate) fn check_dim(expected: usize, x: &[f64]) -> Result<(), DimensionMismatch> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(DimensionMismatch { expected, found: x.len() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_lowest_index_on_ties() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0, 2.0]), 1);
        assert_eq!(argmax(&[5.0, 5.0]), 0);
        assert_eq!(argmax(&[f64::NAN, 1.0, 0.0]), 1);
        assert_eq!(argmax(&[0.0, f64::NAN, -1.0]), 0);
    }
}
