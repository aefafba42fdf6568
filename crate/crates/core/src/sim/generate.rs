use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::realize::realize;
use super::signature::{BadSignatureTable, SignatureTable};
use crate::herd::{Dataset, DiseaseLabel, FeatureVector, NUM_FEATURES};
use crate::rng;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    BadSignatureTable(#[from] BadSignatureTable),
    #[error("invalid simulator configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub seed: u64,
    pub per_class_count: usize,
    /// Scales every disease offset (means and spreads); 0 makes all classes identical.
    pub separability: f64,
    pub table: SignatureTable,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { seed: 0, per_class_count: 100, separability: 1.0, table: SignatureTable::default() }
    }
}

impl SimConfig {
    pub fn new(seed: u64, per_class_count: usize, separability: f64) -> Self {
        Self { seed, per_class_count, separability, ..Self::default() }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.per_class_count < 2 {
            v.push(format!("per_class_count must be at least 2, got {}", self.per_class_count));
        }
        if !(self.separability >= 0.0 && self.separability.is_finite()) {
            v.push(format!("separability must be finite and non-negative, got {}", self.separability));
        }
        if let Err(e) = self.table.check() {
            v.push(e.to_string());
        }
        v
    }

    fn check(&self) -> Result<(), SimError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(SimError::InvalidConfig(v.join("; ")))
        }
    }
}

/// One class-conditional draw, projected onto realisable feature vectors.
pub fn sample_target<R: Rng + ?Sized>(table: &SignatureTable, label: DiseaseLabel, separability: f64, rng: &mut R) -> FeatureVector {
    let mut raw = FeatureVector::zeros();
    for j in 0..NUM_FEATURES {
        let (mean, sd) = table.distribution(label, j, separability);
        let z: f64 = rng.sample(StandardNormal);
        raw[j] = mean + sd * z;
    }
    realize(&raw)
}

/// `per_class_count` examples of every class, interleaved by class.
pub fn generate_dataset(cfg: &SimConfig) -> Result<Dataset, SimError> {
    cfg.check()?;
    let mut rows = Vec::with_capacity(cfg.per_class_count * DiseaseLabel::ALL.len());
    for i in 0..cfg.per_class_count {
        for label in DiseaseLabel::ALL {
            let mut r = rng::stream(cfg.seed, &[0x51A, label.index() as u64, i as u64]);
            rows.push((sample_target(&cfg.table, label, cfg.separability, &mut r), label));
        }
    }
    Ok(Dataset::from_rows(rows))
}
