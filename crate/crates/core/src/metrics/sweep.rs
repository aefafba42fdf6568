//! Training-fraction sweep: one stratified split per fraction, every model trained
//! on the train side and scored on the complementary test side.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate, EvalReport};
use crate::baselines::{train_baseline, BaselineSpec};
use crate::herd::{stratified_split, Dataset, SplitSpec};
use crate::ovr::train_ovr_dataset;
use crate::rng;
use crate::svm::{SolverConfig, SvmHyperparams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    /// RBF SVM with fixed, previously tuned hyperparameters.
    Hposvm { hyperparams: SvmHyperparams<f64>, solver: SolverConfig },
    Baseline(BaselineSpec),
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Hposvm { .. } => "hposvm",
            Self::Baseline(b) => b.name(),
        }
    }

    /// Trains on `train` and evaluates on `test`.
    pub fn run(&self, train: &Dataset, test: &Dataset, seed: u64) -> Result<EvalReport, String> {
        let model: Box<dyn crate::classifier::Classifier> = match self {
            Self::Hposvm { hyperparams, solver } => {
                Box::new(train_ovr_dataset(train, hyperparams, solver, seed).map_err(|e| e.to_string())?)
            }
            Self::Baseline(spec) => Box::new(train_baseline(spec, train, seed).map_err(|e| e.to_string())?),
        };
        evaluate(model.as_ref(), test).map_err(|e| e.to_string())
    }
}

/// Training fractions in whole percent, `1..=70`.
pub fn default_fractions() -> Vec<u32> {
    (1..=70).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub roc_auc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub percent: u32,
    pub model: String,
    /// `Err` carries the reason the fraction could not be evaluated.
    pub outcome: Result<SweepMetrics, String>,
}

impl SweepRow {
    pub fn fraction(&self) -> f64 {
        self.percent as f64 / 100.0
    }
}

pub fn split_seed(seed: u64, percent: u32) -> u64 {
    rng::derive_seed(seed, &[0x5EE9, percent as u64])
}

/// Rows ordered by `(fraction, model)` in the order given; infeasible fractions yield rows with an `Err` outcome.
pub fn sweep(data: &Dataset, models: &[ModelSpec], percents: &[u32], seed: u64) -> Vec<SweepRow> {
    let per_fraction: Vec<Vec<SweepRow>> = percents
        .par_iter()
        .map(|&percent| {
            let s = split_seed(seed, percent);
            let split = stratified_split(data, &SplitSpec::new(percent as f64 / 100.0, s));
            models
                .iter()
                .map(|m| {
                    let outcome = match &split {
                        Err(e) => Err(format!("infeasible split: {e}")),
                        Ok((train, test)) => m.run(train, test, s).map(|r| SweepMetrics {
                            accuracy: r.accuracy,
                            precision: r.precision_weighted,
                            recall: r.recall_weighted,
                            f1: r.f1_weighted,
                            roc_auc: r.roc_auc_weighted,
                        }),
                    };
                    SweepRow { percent, model: m.name().to_string(), outcome }
                })
                .collect()
        })
        .collect();
    per_fraction.into_iter().flatten().collect()
}

pub const SWEEP_CSV_HEADER: [&str; 7] = ["fraction", "model", "accuracy", "precision", "recall", "f1", "roc_auc"];

/// Metric cells of infeasible rows hold `infeasible`; an undefined AUC is `NA`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], writer: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SWEEP_CSV_HEADER)?;
    for row in rows {
        let fraction = format!("{:.2}", row.fraction());
        let cells: Vec<String> = match &row.outcome {
            Ok(m) => vec![
                format!("{:.6}", m.accuracy),
                format!("{:.6}", m.precision),
                format!("{:.6}", m.recall),
                format!("{:.6}", m.f1),
                m.roc_auc.map_or_else(|| "NA".to_string(), |a| format!("{a:.6}")),
            ],
            Err(_) => vec!["infeasible".to_string(); 5],
        };
        let mut record = vec![fraction, row.model.clone()];
        record.extend(cells);
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herd::{DiseaseLabel, FeatureVector, NUM_CLASSES};

    fn toy(per_class: usize) -> Dataset {
        Dataset::from_rows((0..per_class * NUM_CLASSES).map(|i| {
            let class = i % NUM_CLASSES;
            let mut f = FeatureVector::zeros();
            f[class] = 5.0 + (i / NUM_CLASSES) as f64 * 0.01;
            f[29] = (i as f64 * 0.37).sin();
            (f, DiseaseLabel::from_index(class).unwrap())
        }))
    }

    #[test]
    fn one_row_per_model_and_fraction_in_order() {
        let data = toy(10);
        let models = [ModelSpec::Baseline(BaselineSpec::gaussian_nb()), ModelSpec::Baseline(BaselineSpec::decision_tree())];
        let rows = sweep(&data, &models, &[10, 30, 50], 3);
        let keys: Vec<(u32, &str)> = rows.iter().map(|r| (r.percent, r.model.as_str())).collect();
        assert_eq!(
            keys,
            vec![(10, "gaussian_nb"), (10, "decision_tree"), (30, "gaussian_nb"), (30, "decision_tree"), (50, "gaussian_nb"), (50, "decision_tree")]
        );
        assert!(rows.iter().all(|r| r.outcome.is_ok()));
        assert_eq!(rows, sweep(&data, &models, &[10, 30, 50], 3));
    }

    #[test]
    fn infeasible_fraction_is_marked_not_fatal() {
        let data = Dataset::from_rows((0..13).map(|i| (FeatureVector::zeros(), DiseaseLabel::from_index(i).unwrap())));
        let rows = sweep(&data, &[ModelSpec::Baseline(BaselineSpec::knn())], &[20], 0);
        assert_eq!(rows.len(), 1);
        assert!(rows[0].outcome.as_ref().unwrap_err().contains("infeasible"));
        let mut out = Vec::new();
        write_sweep_csv(&rows, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap().lines().nth(1).unwrap(), "0.20,knn,infeasible,infeasible,infeasible,infeasible,infeasible");
    }
}
