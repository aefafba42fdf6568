use serde::{Deserialize, Serialize};

use super::error::SvmError;
use crate::scalar::Scalar;

/// Per-feature `(mean, stddev)` learned from a training set.
///
/// Columns with zero variance keep a stddev of one, so they pass through centred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer<T> {
    pub mean: Vec<T>,
    pub stddev: Vec<T>,
}

impl<T: Scalar> Standardizer<T> {
    /// Fits population statistics. Each column is summed in sorted order so the
    /// result does not depend on row order.
    pub fn fit(rows: &[Vec<T>]) -> Result<Self, SvmError> {
        let Some(first) = rows.first() else {
            return Err(SvmError::TooFewExamples(0));
        };
        let dim = first.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(SvmError::DimensionMismatch { expected: dim, found: bad.len() });
        }
        let n = T::from_usize_lossy(rows.len());
        let mut mean = Vec::with_capacity(dim);
        let mut stddev = Vec::with_capacity(dim);
        let mut column = Vec::with_capacity(rows.len());
        for j in 0..dim {
            column.clear();
            column.extend(rows.iter().map(|r| r[j]));
            column.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            let mu = column.iter().copied().sum::<T>() / n;
            let mut deviations: Vec<T> = column.iter().map(|&v| (v - mu) * (v - mu)).collect();
            deviations.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            let var = deviations.into_iter().sum::<T>() / n;
            let sd = var.sqrt();
            mean.push(mu);
            stddev.push(if sd > T::zero() && sd.is_finite() { sd } else { T::one() });
        }
        Ok(Self { mean, stddev })
    }

    pub fn identity(dim: usize) -> Self {
        Self { mean: vec![T::zero(); dim], stddev: vec![T::one(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn transform(&self, x: &[T]) -> Result<Vec<T>, SvmError> {
        if x.len() != self.dim() {
            return Err(SvmError::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(x.iter().zip(&self.mean).zip(&self.stddev).map(|((&v, &m), &s)| (v - m) / s).collect())
    }

    pub fn transform_all(&self, rows: &[Vec<T>]) -> Result<Vec<Vec<T>>, SvmError> {
        rows.iter().map(|r| self.transform(r)).collect()
    }
}
