use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::chromosome::{decode, Chromosome, GaError, GeneBounds};
use crate::classifier::argmax;
use crate::herd::{stratified_folds, Dataset, DiseaseLabel, HerdError, NUM_CLASSES};
use crate::metrics::confusion;
use crate::ovr::train_ovr;
use crate::svm::{SolverConfig, SvmHyperparams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitnessKind {
    WeightedF1,
    Accuracy,
}

/// How a chromosome is scored: mean validation metric over stratified folds of the training data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessSpec {
    pub kind: FitnessKind,
    pub cv_folds: usize,
    pub solver: SolverConfig,
    pub seed: u64,
}

impl FitnessSpec {
    pub fn new(cv_folds: usize, seed: u64) -> Self {
        Self { kind: FitnessKind::WeightedF1, cv_folds, solver: SolverConfig::default(), seed }
    }
}

/// Memoised fitness evaluator for one training set.
pub struct FitnessCache {
    rows: Vec<Vec<f64>>,
    labels: Vec<DiseaseLabel>,
    folds: Vec<usize>,
    bounds: GeneBounds,
    spec: FitnessSpec,
    memo: Mutex<HashMap<Chromosome, f64>>,
}

impl FitnessCache {
    pub fn new(train: &Dataset, bounds: &GeneBounds, spec: &FitnessSpec) -> Result<Self, GaError> {
        if spec.cv_folds < 2 {
            return Err(GaError::InvalidConfig(format!("cv_folds must be at least 2, got {}", spec.cv_folds)));
        }
        let counts = train.class_counts();
        for label in DiseaseLabel::ALL {
            let count = counts[label.index()];
            if count < spec.cv_folds {
                return Err(HerdError::ClassTooSmall { label, count }.into());
            }
        }
        Ok(Self {
            rows: train.feature_rows(),
            labels: train.labels(),
            folds: stratified_folds(train, spec.cv_folds, spec.seed),
            bounds: *bounds,
            spec: *spec,
            memo: Mutex::new(HashMap::new()),
        })
    }

    /// Number of distinct chromosomes evaluated so far.
    pub fn evaluations(&self) -> usize {
        self.memo.lock().expect("fitness memo poisoned").len()
    }

    pub fn get(&self, c: &Chromosome) -> Result<f64, GaError> {
        if let Some(&f) = self.memo.lock().expect("fitness memo poisoned").get(c) {
            return Ok(f);
        }
        let f = self.compute(c)?;
        self.memo.lock().expect("fitness memo poisoned").insert(c.clone(), f);
        Ok(f)
    }

    fn compute(&self, c: &Chromosome) -> Result<f64, GaError> {
        let (cost, gamma) = decode::<f64>(c, &self.bounds)?;
        assert!(
            (self.bounds.c_min..=self.bounds.c_max).contains(&cost)
                && (self.bounds.gamma_min..=self.bounds.gamma_max).contains(&gamma),
            "decoded parameters outside bounds"
        );
        let hp = SvmHyperparams::rbf(cost, gamma);
        let mut total = 0.0;
        for fold in 0..self.spec.cv_folds {
            let (mut tr_rows, mut tr_labels, mut va_rows, mut va_truth) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
            for (i, &f) in self.folds.iter().enumerate() {
                if f == fold {
                    va_rows.push(self.rows[i].clone());
                    va_truth.push(self.labels[i].index());
                } else {
                    tr_rows.push(self.rows[i].clone());
                    tr_labels.push(self.labels[i]);
                }
            }
            let model = train_ovr(&tr_rows, &tr_labels, &hp, &self.spec.solver, self.spec.seed)
                .map_err(|e| GaError::InvalidConfig(e.to_string()))?;
            let predicted: Vec<usize> = va_rows
                .iter()
                .map(|r| argmax(&model.decision_values(r).expect("dimension fixed by training data")))
                .collect();
            let cm = confusion(&va_truth, &predicted, NUM_CLASSES).expect("non-empty validation fold");
            total += match self.spec.kind {
                FitnessKind::WeightedF1 => cm.weighted().f1,
                FitnessKind::Accuracy => cm.accuracy(),
            };
        }
        Ok(total / self.spec.cv_folds as f64)
    }
}
