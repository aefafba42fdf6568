use serde::{Deserialize, Serialize};

use super::error::SvmError;
use crate::scalar::Scalar;

/// Kernel standing in for the inner product in the lifted feature space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec<T> {
    /// `exp(-gamma * ||x - y||^2)`
    Rbf { gamma: T },
    /// `<x, y>`
    Linear,
}

impl<T: Scalar> KernelSpec<T> {
    pub fn rbf(gamma: T) -> Self {
        KernelSpec::Rbf { gamma }
    }

    pub fn check(&self) -> Result<(), SvmError> {
        match *self {
            KernelSpec::Rbf { gamma } if !(gamma > T::zero() && gamma.is_finite()) => {
                Err(SvmError::InvalidHyperparameter(format!("RBF gamma must be positive, got {gamma}")))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: &[T], y: &[T]) -> Result<T, SvmError> {
        if x.len() != y.len() {
            return Err(SvmError::DimensionMismatch { expected: x.len(), found: y.len() });
        }
        Ok(self.eval_unchecked(x, y))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[T], y: &[T]) -> T {
        match *self {
            KernelSpec::Rbf { gamma } => {
                let d2: T = x.iter().zip(y).map(|(&a, &b)| (a - b) * (a - b)).sum();
                (-gamma * d2).exp()
            }
            KernelSpec::Linear => x.iter().zip(y).map(|(&a, &b)| a * b).sum(),
        }
    }
}

/// Dense symmetric kernel matrix over a training set.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Gram<T> {
    pub fn compute(kernel: &KernelSpec<T>, rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let k = kernel.eval_unchecked(&rows[i], &rows[j]);
                data[i * n + j] = k;
                data[j * n + i] = k;
            }
        }
        Self { n, data }
    }

    /// Wraps a row-major `n x n` matrix.
    pub fn from_row_major(n: usize, data: Vec<T>) -> Result<Self, SvmError> {
        if data.len() != n * n {
            return Err(SvmError::DimensionMismatch { expected: n * n, found: data.len() });
        }
        Ok(Self { n, data })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rbf_of_identical_points_is_one() {
        let k = KernelSpec::rbf(3.7);
        assert_eq!(k.eval(&[1.0, -2.0, 0.5], &[1.0, -2.0, 0.5]).unwrap(), 1.0);
    }

    #[test]
    fn rbf_closed_form() {
        // exp(-0.5 * (1 + 1))
        let v = KernelSpec::rbf(0.5).eval(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert!((v - 0.36788).abs() < 1e-5);
    }

    #[test]
    fn linear_is_dot_product() {
        assert_eq!(KernelSpec::<f64>::Linear.eval(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 11.0);
        assert_eq!(KernelSpec::<f32>::Linear.eval(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 11.0f32);
    }

    #[test]
    fn mismatched_dimensions_error() {
        let err = KernelSpec::rbf(1.0).eval(&[1.0], &[1.0, 2.0]).unwrap_err();
        assert_eq!(err, SvmError::DimensionMismatch { expected: 1, found: 2 });
    }

    #[test]
    fn non_positive_gamma_is_rejected() {
        assert!(KernelSpec::rbf(0.0f64).check().is_err());
        assert!(KernelSpec::rbf(-1.0f64).check().is_err());
        assert!(KernelSpec::rbf(1e-9f64).check().is_ok());
    }

    #[test]
    fn gram_is_symmetric_with_unit_diagonal() {
        let rows = vec![vec![0.0, 1.0], vec![2.0, -1.0], vec![0.5, 0.5]];
        let g = Gram::compute(&KernelSpec::rbf(0.3), &rows);
        for i in 0..3 {
            assert_eq!(g.get(i, i), 1.0);
            for j in 0..3 {
                assert_eq!(g.get(i, j), g.get(j, i));
                assert!(g.get(i, j) > 0.0 && g.get(i, j) <= 1.0);
            }
        }
    }
}
