use serde::{Deserialize, Serialize};

use super::error::SvmError;
use super::kernel::{Gram, KernelSpec};
use super::scaling::Standardizer;
use super::solver::{solve_dual, SolverConfig};
use crate::rng;
use crate::scalar::Scalar;

/// Box bound `c` on every multiplier together with the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmHyperparams<T> {
    pub c: T,
    pub kernel: KernelSpec<T>,
}

impl<T: Scalar> SvmHyperparams<T> {
    pub fn rbf(c: T, gamma: T) -> Self {
        Self { c, kernel: KernelSpec::rbf(gamma) }
    }

    pub fn check(&self) -> Result<(), SvmError> {
        if !(self.c > T::zero() && self.c.is_finite()) {
            return Err(SvmError::InvalidHyperparameter(format!("c must be positive, got {}", self.c)));
        }
        self.kernel.check()
    }
}

/// `D(x) = sum_i b_i l_i g(x_i, x) + a` over the support vectors, in scaled space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discriminant<T> {
    pub kernel: KernelSpec<T>,
    pub support_vectors: Vec<Vec<T>>,
    pub sv_labels: Vec<i8>,
    pub betas: Vec<T>,
    pub bias: T,
}

impl<T: Scalar> Discriminant<T> {
    pub fn dim(&self) -> Option<usize> {
        self.support_vectors.first().map(Vec::len)
    }

    /// Evaluates on an already-scaled input.
    pub fn eval_scaled(&self, z: &[T]) -> T {
        let mut sum = self.bias;
        for ((sv, &label), &beta) in self.support_vectors.iter().zip(&self.sv_labels).zip(&self.betas) {
            let k = self.kernel.eval_unchecked(sv, z);
            sum += if label > 0 { beta * k } else { -beta * k };
        }
        sum
    }

    /// Structural checks used when a model is loaded from disk.
    pub fn check(&self, dim: usize, c: T) -> Result<(), SvmError> {
        self.kernel.check()?;
        let n = self.support_vectors.len();
        if self.sv_labels.len() != n || self.betas.len() != n {
            return Err(SvmError::DimensionMismatch { expected: n, found: self.betas.len().min(self.sv_labels.len()) });
        }
        if let Some(sv) = self.support_vectors.iter().find(|sv| sv.len() != dim) {
            return Err(SvmError::DimensionMismatch { expected: dim, found: sv.len() });
        }
        if self.sv_labels.iter().any(|&l| l != 1 && l != -1) {
            return Err(SvmError::InvalidLabel);
        }
        let slack = c * T::lit(1e-9);
        if self.betas.iter().any(|&b| !(b > T::zero() && b <= c + slack)) {
            return Err(SvmError::InvalidHyperparameter("multiplier outside (0, c]".into()));
        }
        if !self.bias.is_finite() {
            return Err(SvmError::InvalidHyperparameter("non-finite bias".into()));
        }
        Ok(())
    }
}

/// Trained binary soft-margin SVM with its feature scaling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySvmModel<T> {
    pub hyperparams: SvmHyperparams<T>,
    pub scaling: Standardizer<T>,
    pub discriminant: Discriminant<T>,
}

impl<T: Scalar> BinarySvmModel<T> {
    pub fn decision_value(&self, x: &[T]) -> Result<T, SvmError> {
        let z = self.scaling.transform(x)?;
        Ok(self.discriminant.eval_scaled(&z))
    }

    /// `+1` when `D(x) >= 0`, else `-1`.
    pub fn predict(&self, x: &[T]) -> Result<i8, SvmError> {
        Ok(if self.decision_value(x)? >= T::zero() { 1 } else { -1 })
    }

    pub fn num_support_vectors(&self) -> usize {
        self.discriminant.support_vectors.len()
    }
}

/// Result of fitting: the model plus solver diagnostics and the full multiplier vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport<T> {
    pub model: BinarySvmModel<T>,
    /// One multiplier per training example, zeros included, in input order.
    pub multipliers: Vec<T>,
    pub iterations: usize,
    /// `false` when the iteration cap stopped the solver; the model is the best iterate found.
    pub converged: bool,
    pub gap: T,
    pub objective_trace: Vec<T>,
}

/// Tie-breaking key of a training example: a seeded hash of its raw feature bits.
pub fn example_key<T: Scalar>(seed: u64, row: &[T]) -> u64 {
    let mut bytes = Vec::with_capacity(row.len() * 8);
    for v in row {
        bytes.extend_from_slice(&v.to_f64_lossy().to_bits().to_le_bytes());
    }
    rng::derive_seed(seed, &[rng::fnv1a(&bytes)])
}

fn check_labels(labels: &[i8]) -> Result<(), SvmError> {
    if labels.iter().any(|&l| l != 1 && l != -1) {
        return Err(SvmError::InvalidLabel);
    }
    let has_pos = labels.contains(&1);
    let has_neg = labels.contains(&-1);
    if !(has_pos && has_neg) {
        return Err(SvmError::SingleClassInput);
    }
    Ok(())
}

/// Fits a binary SVM on raw features; standardisation statistics come from `rows`.
pub fn train_binary<T: Scalar>(
    rows: &[Vec<T>],
    labels: &[i8],
    hp: &SvmHyperparams<T>,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<FitReport<T>, SvmError> {
    if rows.len() != labels.len() {
        return Err(SvmError::DimensionMismatch { expected: rows.len(), found: labels.len() });
    }
    if rows.len() < 2 {
        return Err(SvmError::TooFewExamples(rows.len()));
    }
    check_labels(labels)?;
    hp.check()?;
    cfg.check().map_err(SvmError::InvalidHyperparameter)?;
    let scaling = Standardizer::fit(rows)?;
    let scaled = scaling.transform_all(rows)?;
    let gram = Gram::compute(&hp.kernel, &scaled);
    let keys: Vec<u64> = rows.iter().map(|r| example_key(seed, r)).collect();
    Ok(fit_prescaled(&scaled, &gram, labels, &keys, hp, cfg, scaling))
}

/// Solver core shared with the one-vs-rest layer, which reuses one Gram matrix for every class.
pub(crate) fn fit_prescaled<T: Scalar>(
    scaled: &[Vec<T>],
    gram: &Gram<T>,
    labels: &[i8],
    keys: &[u64],
    hp: &SvmHyperparams<T>,
    cfg: &SolverConfig,
    scaling: Standardizer<T>,
) -> FitReport<T> {
    let y: Vec<T> = labels.iter().map(|&l| if l > 0 { T::one() } else { -T::one() }).collect();
    let sol = solve_dual(gram, &y, keys, hp.c, cfg);

    // Support vectors are stored in key order so the model does not depend on input order.
    let mut sv_idx: Vec<usize> = (0..scaled.len()).filter(|&i| sol.betas[i] > T::zero()).collect();
    sv_idx.sort_by_key(|&i| (keys[i], i));
    let discriminant = Discriminant {
        kernel: hp.kernel,
        support_vectors: sv_idx.iter().map(|&i| scaled[i].clone()).collect(),
        sv_labels: sv_idx.iter().map(|&i| labels[i]).collect(),
        betas: sv_idx.iter().map(|&i| sol.betas[i]).collect(),
        bias: sol.bias,
    };
    FitReport {
        model: BinarySvmModel { hyperparams: *hp, scaling, discriminant },
        multipliers: sol.betas,
        iterations: sol.iterations,
        converged: sol.converged,
        gap: sol.gap,
        objective_trace: sol.objective_trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(rows: &[Vec<f64>], labels: &[i8], hp: SvmHyperparams<f64>, tol: f64) -> FitReport<f64> {
        train_binary(rows, labels, &hp, &SolverConfig::with_tolerance(tol), 0).unwrap()
    }

    #[test]
    fn two_point_linear_separator_sits_at_origin() {
        let hp = SvmHyperparams { c: 100.0, kernel: KernelSpec::Linear };
        let report = fit(&[vec![1.0], vec![-1.0]], &[1, -1], hp, 1e-9);
        let m = &report.model;
        assert_eq!(m.num_support_vectors(), 2);
        assert_eq!(m.discriminant.betas[0], m.discriminant.betas[1]);
        assert!(m.decision_value(&[0.0]).unwrap().abs() < 1e-9);
        assert_eq!(m.predict(&[0.3]).unwrap(), 1);
        assert_eq!(m.predict(&[-0.3]).unwrap(), -1);
    }

    #[test]
    fn single_precision_models_train_too() {
        let hp = SvmHyperparams::<f32> { c: 100.0, kernel: KernelSpec::Linear };
        let report = train_binary(&[vec![1.0f32], vec![-1.0]], &[1, -1], &hp, &SolverConfig::with_tolerance(1e-5), 0).unwrap();
        assert!(report.model.decision_value(&[0.0]).unwrap().abs() < 1e-6);
        assert!((report.multipliers[0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn xor_is_separated_by_rbf() {
        let rows = vec![vec![1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0], vec![-1.0, 1.0]];
        let labels = [1, 1, -1, -1];
        let report = fit(&rows, &labels, SvmHyperparams::rbf(10.0, 1.0), 1e-6);
        for (row, &l) in rows.iter().zip(&labels) {
            assert_eq!(report.model.predict(row).unwrap(), l);
        }
    }

    #[test]
    fn single_class_is_rejected() {
        let err = train_binary(&[vec![1.0], vec![2.0]], &[1, 1], &SvmHyperparams::rbf(1.0, 1.0), &SolverConfig::default(), 0);
        assert_eq!(err.unwrap_err(), SvmError::SingleClassInput);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let cfg = SolverConfig::default();
        let hp = SvmHyperparams::rbf(1.0, 1.0);
        assert_eq!(train_binary(&[vec![1.0]], &[1], &hp, &cfg, 0).unwrap_err(), SvmError::TooFewExamples(1));
        assert_eq!(train_binary(&[vec![1.0], vec![2.0]], &[1, 0], &hp, &cfg, 0).unwrap_err(), SvmError::InvalidLabel);
        assert!(matches!(
            train_binary(&[vec![1.0], vec![2.0]], &[1, -1], &SvmHyperparams::rbf(0.0, 1.0), &cfg, 0),
            Err(SvmError::InvalidHyperparameter(_))
        ));
        let report = fit(&[vec![1.0], vec![2.0]], &[1, -1], hp, 1e-6);
        assert!(matches!(report.model.decision_value(&[1.0, 2.0]), Err(SvmError::DimensionMismatch { .. })));
    }

    #[test]
    fn free_support_vectors_sit_on_the_margin() {
        let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![(i as f64 * 0.61).sin() * 2.0, (i as f64 * 1.7).cos()]).collect();
        let labels: Vec<i8> = rows.iter().map(|r| if r[0] + 0.3 * r[1] > 0.1 { 1 } else { -1 }).collect();
        let hp = SvmHyperparams::rbf(3.0, 0.5);
        let tol = 1e-3;
        let report = fit(&rows, &labels, hp, tol);
        assert!(report.converged);
        for (i, row) in rows.iter().enumerate() {
            let beta = report.multipliers[i];
            let margin = labels[i] as f64 * report.model.decision_value(row).unwrap();
            if beta > 0.0 && beta < hp.c {
                assert!((margin - 1.0).abs() <= tol + 1e-9, "free sv {i}: {margin}");
            }
        }
    }
}
