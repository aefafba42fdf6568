use super::error::SvmError;
use super::kernel::Gram;
use crate::scalar::Scalar;

/// Dual objective `sum(b) - 1/2 sum_ij b_i b_j l_i l_j g_ij`, evaluated directly.
pub fn dual_objective<T: Scalar>(betas: &[T], labels: &[T], gram: &Gram<T>) -> Result<T, SvmError> {
    let n = betas.len();
    if labels.len() != n {
        return Err(SvmError::DimensionMismatch { expected: n, found: labels.len() });
    }
    if gram.len() != n {
        return Err(SvmError::DimensionMismatch { expected: n, found: gram.len() });
    }
    let linear: T = betas.iter().copied().sum();
    let mut quadratic = T::zero();
    for i in 0..n {
        if betas[i] == T::zero() {
            continue;
        }
        let row = gram.row(i);
        let inner: T = (0..n).map(|j| betas[j] * labels[j] * row[j]).sum();
        quadratic += betas[i] * labels[i] * inner;
    }
    Ok(linear - quadratic / T::lit(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_multipliers_give_zero() {
        let g = Gram::from_row_major(2, vec![1.0, 0.3, 0.3, 1.0]).unwrap();
        assert_eq!(dual_objective(&[0.0, 0.0], &[1.0, -1.0], &g).unwrap(), 0.0);
    }

    #[test]
    fn single_point_is_t_minus_half_t_squared() {
        let g = Gram::from_row_major(1, vec![1.0]).unwrap();
        for t in [0.0, 0.5, 1.0, 2.5] {
            assert_eq!(dual_objective(&[t], &[1.0], &g).unwrap(), t - t * t / 2.0);
        }
    }

    #[test]
    fn symmetric_pair_matches_direct_summation() {
        let k = 0.25;
        let g = Gram::from_row_major(2, vec![1.0, k, k, 1.0]).unwrap();
        let (b, l): ([f64; 2], [f64; 2]) = ([0.7, 0.7], [1.0, -1.0]);
        let mut brute = b[0] + b[1];
        for i in 0..2 {
            for j in 0..2 {
                brute -= 0.5 * b[i] * b[j] * l[i] * l[j] * g.get(i, j);
            }
        }
        assert!((dual_objective(&b, &l, &g).unwrap() - brute).abs() < 1e-15);
    }

    #[test]
    fn lengths_must_agree() {
        let g = Gram::from_row_major(1, vec![1.0]).unwrap();
        assert!(dual_objective(&[1.0, 2.0], &[1.0], &g).is_err());
        assert!(dual_objective(&[1.0, 2.0], &[1.0, 1.0], &g).is_err());
    }
}
