//! One-vs-rest reduction: thirteen binary SVMs sharing hyperparameters,
//! scaling and one Gram matrix.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{argmax, check_dim, Classifier, DimensionMismatch};
use crate::herd::{Dataset, DiseaseLabel, NUM_CLASSES};
use crate::scalar::Scalar;
use crate::svm::{
    example_key, fit_prescaled, BinarySvmModel, Discriminant, Gram, SolverConfig, Standardizer, SvmError, SvmHyperparams,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OvrError {
    #[error("class {0} has no training examples")]
    MissingClass(DiseaseLabel),
    #[error(transparent)]
    Svm(#[from] SvmError),
}

/// Thirteen per-class discriminants on a common feature scaling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MulticlassSvmModel<T> {
    pub hyperparams: SvmHyperparams<T>,
    pub scaling: Standardizer<T>,
    /// Indexed by class index.
    pub per_class: Vec<Discriminant<T>>,
    /// Whether each binary solve met the KKT tolerance before the iteration cap.
    pub converged: Vec<bool>,
}

pub fn train_ovr<T: Scalar>(
    rows: &[Vec<T>],
    labels: &[DiseaseLabel],
    hp: &SvmHyperparams<T>,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<MulticlassSvmModel<T>, OvrError> {
    if rows.len() != labels.len() {
        return Err(SvmError::DimensionMismatch { expected: rows.len(), found: labels.len() }.into());
    }
    let mut counts = [0usize; NUM_CLASSES];
    for l in labels {
        counts[l.index()] += 1;
    }
    if counts.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(SvmError::SingleClassInput.into());
    }
    if let Some(missing) = counts.iter().position(|&c| c == 0) {
        return Err(OvrError::MissingClass(DiseaseLabel::from_index(missing).expect("class index")));
    }
    hp.check()?;
    cfg.check().map_err(SvmError::InvalidHyperparameter)?;

    let scaling = Standardizer::fit(rows)?;
    let scaled = scaling.transform_all(rows)?;
    let gram = Gram::compute(&hp.kernel, &scaled);
    let keys: Vec<u64> = rows.iter().map(|r| example_key(seed, r)).collect();

    let fits: Vec<(Discriminant<T>, bool)> = DiseaseLabel::ALL
        .par_iter()
        .map(|&class| {
            let binary: Vec<i8> = labels.iter().map(|&l| if l == class { 1 } else { -1 }).collect();
            let report = fit_prescaled(&scaled, &gram, &binary, &keys, hp, cfg, Standardizer::identity(0));
            (report.model.discriminant, report.converged)
        })
        .collect();
    let (per_class, converged) = fits.into_iter().unzip();
    Ok(MulticlassSvmModel { hyperparams: *hp, scaling, per_class, converged })
}

/// Convenience wrapper over a [`Dataset`].
pub fn train_ovr_dataset(
    data: &Dataset,
    hp: &SvmHyperparams<f64>,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<MulticlassSvmModel<f64>, OvrError> {
    train_ovr(&data.feature_rows(), &data.labels(), hp, cfg, seed)
}

impl<T: Scalar> MulticlassSvmModel<T> {
    pub fn dim(&self) -> usize {
        self.scaling.dim()
    }

    pub fn decision_values(&self, x: &[T]) -> Result<Vec<T>, SvmError> {
        let z = self.scaling.transform(x)?;
        Ok(self.per_class.iter().map(|d| d.eval_scaled(&z)).collect())
    }

    pub fn predict(&self, x: &[T]) -> Result<DiseaseLabel, SvmError> {
        let scores = self.decision_values(x)?;
        Ok(DiseaseLabel::from_index(argmax(&scores)).expect("class index"))
    }

    /// Row `i`, column `k`: class `k`'s decision value on example `i`.
    pub fn score_matrix(&self, rows: &[Vec<T>]) -> Result<Vec<Vec<T>>, SvmError> {
        rows.iter().map(|r| self.decision_values(r)).collect()
    }

    /// Standalone binary model for one class (class vs rest).
    pub fn binary_model(&self, class: DiseaseLabel) -> BinarySvmModel<T> {
        BinarySvmModel {
            hyperparams: self.hyperparams,
            scaling: self.scaling.clone(),
            discriminant: self.per_class[class.index()].clone(),
        }
    }

    pub fn check(&self) -> Result<(), SvmError> {
        self.hyperparams.check()?;
        if self.per_class.len() != NUM_CLASSES {
            return Err(SvmError::DimensionMismatch { expected: NUM_CLASSES, found: self.per_class.len() });
        }
        if self.scaling.stddev.len() != self.dim() || self.scaling.stddev.iter().any(|&s| !(s > T::zero())) {
            return Err(SvmError::InvalidHyperparameter("invalid scaling statistics".into()));
        }
        for d in &self.per_class {
            if d.kernel != self.hyperparams.kernel {
                return Err(SvmError::InvalidHyperparameter("per-class kernel differs from shared kernel".into()));
            }
            d.check(self.dim(), self.hyperparams.c)?;
        }
        Ok(())
    }
}

impl Classifier for MulticlassSvmModel<f64> {
    fn dim(&self) -> usize {
        MulticlassSvmModel::dim(self)
    }

    fn scores(&self, x: &[f64]) -> Result<[f64; NUM_CLASSES], DimensionMismatch> {
        check_dim(MulticlassSvmModel::dim(self), x)?;
        let values = self.decision_values(x).map_err(|_| DimensionMismatch { expected: self.dim(), found: x.len() })?;
        let mut out = [0.0; NUM_CLASSES];
        out.copy_from_slice(&values);
        Ok(out)
    }
}
