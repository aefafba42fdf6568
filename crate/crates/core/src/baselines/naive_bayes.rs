use serde::{Deserialize, Serialize};

use crate::classifier::{check_dim, Classifier, DimensionMismatch};
use crate::herd::NUM_CLASSES;
use crate::svm::Standardizer;

/// Gaussian naive Bayes with per-class diagonal variances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNbModel {
    pub scaling: Standardizer<f64>,
    /// `None` for classes absent from training.
    pub log_prior: Vec<Option<f64>>,
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
}

/// Stand-in log-posterior for classes never seen in training.
const ABSENT_CLASS_SCORE: f64 = f64::MIN;

fn sorted_sum(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    values.into_iter().sum()
}

impl GaussianNbModel {
    pub(crate) fn fit(scaling: Standardizer<f64>, scaled: &[Vec<f64>], classes: &[usize], var_smoothing: f64) -> Self {
        let dim = scaling.dim();
        let n = scaled.len() as f64;
        let mut members: Vec<Vec<&Vec<f64>>> = vec![Vec::new(); NUM_CLASSES];
        for (row, &c) in scaled.iter().zip(classes) {
            members[c].push(row);
        }
        // Pooled variance of standardised columns is 1 unless the column is constant.
        let max_var = (0..dim)
            .map(|d| {
                let mean = sorted_sum(scaled.iter().map(|r| r[d]).collect()) / n;
                sorted_sum(scaled.iter().map(|r| (r[d] - mean).powi(2)).collect()) / n
            })
            .fold(0.0, f64::max);
        let epsilon = var_smoothing * if max_var > 0.0 { max_var } else { 1.0 };

        let mut log_prior = Vec::with_capacity(NUM_CLASSES);
        let mut means = Vec::with_capacity(NUM_CLASSES);
        let mut variances = Vec::with_capacity(NUM_CLASSES);
        for group in &members {
            if group.is_empty() {
                log_prior.push(None);
                means.push(vec![0.0; dim]);
                variances.push(vec![1.0; dim]);
                continue;
            }
            let m = group.len() as f64;
            let mu: Vec<f64> = (0..dim).map(|d| sorted_sum(group.iter().map(|r| r[d]).collect()) / m).collect();
            let var: Vec<f64> = (0..dim)
                .map(|d| sorted_sum(group.iter().map(|r| (r[d] - mu[d]).powi(2)).collect()) / m + epsilon)
                .collect();
            log_prior.push(Some((m / n).ln()));
            means.push(mu);
            variances.push(var);
        }
        Self { scaling, log_prior, means, variances }
    }
}

impl Classifier for GaussianNbModel {
    fn dim(&self) -> usize {
        self.scaling.dim()
    }

    /// Normalised log-posteriors over the classes seen in training.
    fn scores(&self, x: &[f64]) -> Result<[f64; NUM_CLASSES], DimensionMismatch> {
        check_dim(self.dim(), x)?;
        let z = self.scaling.transform(x).expect("dimension checked");
        let mut joint = [ABSENT_CLASS_SCORE; NUM_CLASSES];
        for k in 0..NUM_CLASSES {
            let Some(prior) = self.log_prior[k] else { continue };
            let ll: f64 = z
                .iter()
                .zip(&self.means[k])
                .zip(&self.variances[k])
                .map(|((v, mu), var)| -0.5 * ((2.0 * std::f64::consts::PI * var).ln() + (v - mu).powi(2) / var))
                .sum();
            joint[k] = prior + ll;
        }
        let seen = || (0..NUM_CLASSES).filter(|&k| self.log_prior[k].is_some());
        let max = seen().map(|k| joint[k]).fold(f64::NEG_INFINITY, f64::max);
        let lse = max + seen().map(|k| (joint[k] - max).exp()).sum::<f64>().ln();
        for k in seen() {
            joint[k] -= lse;
        }
        Ok(joint)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{fixtures, train_baseline_rows, BaselineSpec};
    use crate::classifier::Classifier;
    use crate::herd::DiseaseLabel;

    #[test]
    fn far_apart_clusters_are_classified_perfectly() {
        let (train, labels) = fixtures::clusters(13, 20, 13, 10.0, 1);
        let (test, truth) = fixtures::clusters(13, 20, 13, 10.0, 2);
        let m = train_baseline_rows(&BaselineSpec::gaussian_nb(), &train, &labels, 0).unwrap();
        assert_eq!(m.predict_all(&test).unwrap(), truth);
    }

    #[test]
    fn symmetric_clusters_tie_at_midpoint() {
        let rows: Vec<Vec<f64>> = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0].iter().map(|&v| vec![v]).collect();
        let labels = [DiseaseLabel::Healthy, DiseaseLabel::Healthy, DiseaseLabel::Healthy]
            .into_iter()
            .chain([DiseaseLabel::Mastitis; 3])
            .collect::<Vec<_>>();
        let m = train_baseline_rows(&BaselineSpec::gaussian_nb(), &rows, &labels, 0).unwrap();
        let s = m.scores(&[0.0]).unwrap();
        assert!((s[DiseaseLabel::Healthy.index()] - s[DiseaseLabel::Mastitis.index()]).abs() < 1e-12);
    }

    #[test]
    fn extreme_inputs_stay_finite() {
        let (rows, labels) = fixtures::clusters(4, 1, 3, 5.0, 3);
        let m = train_baseline_rows(&BaselineSpec::gaussian_nb(), &rows, &labels, 0).unwrap();
        for probe in [[1e6, -1e6, 0.0], [0.0; 3], [-50.0, 50.0, 1e3]] {
            assert!(m.scores(&probe).unwrap().iter().all(|v| v.is_finite()));
        }
    }
}
