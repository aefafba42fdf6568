use serde::{Deserialize, Serialize};

use crate::classifier::{check_dim, Classifier, DimensionMismatch};
use crate::herd::NUM_CLASSES;
use crate::svm::{example_key, Standardizer};

/// k-nearest neighbours by Euclidean distance on standardised features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub scaling: Standardizer<f64>,
    pub points: Vec<Vec<f64>>,
    pub classes: Vec<usize>,
    /// Neighbour tie-break keys, so equidistant points are ranked independently of row order.
    pub keys: Vec<u64>,
}

impl KnnModel {
    pub(crate) fn fit(scaling: Standardizer<f64>, scaled: Vec<Vec<f64>>, classes: &[usize], k: usize, seed: u64) -> Self {
        let keys = scaled.iter().map(|r| example_key(seed, r)).collect();
        Self { k, scaling, points: scaled, classes: classes.to_vec(), keys }
    }
}

impl Classifier for KnnModel {
    fn dim(&self) -> usize {
        self.scaling.dim()
    }

    /// Fraction of the `k` nearest neighbours voting for each class.
    fn scores(&self, x: &[f64]) -> Result<[f64; NUM_CLASSES], DimensionMismatch> {
        check_dim(self.dim(), x)?;
        let z = self.scaling.transform(x).expect("dimension checked");
        let mut ranked: Vec<(f64, u64, usize)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.iter().zip(&z).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(), self.keys[i], i))
            .collect();
        let k = self.k.min(ranked.len());
        let by_distance = |a: &(f64, u64, usize), b: &(f64, u64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2));
        if k < ranked.len() {
            ranked.select_nth_unstable_by(k, by_distance);
        }
        let mut votes = [0.0; NUM_CLASSES];
        for &(_, _, i) in &ranked[..k] {
            votes[self.classes[i]] += 1.0;
        }
        for v in &mut votes {
            *v /= k as f64;
        }
        Ok(votes)
    }
}
