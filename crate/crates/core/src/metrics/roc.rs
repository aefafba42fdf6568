use serde::{Deserialize, Serialize};

use super::error::MetricsError;
use crate::scalar::Scalar;

/// ROC points from `(0, 0)` to `(1, 1)`, one per distinct score threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    /// `(false_positive_rate, true_positive_rate)`
    pub points: Vec<(f64, f64)>,
}

impl RocCurve {
    /// Trapezoidal area under the curve.
    pub fn auc(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0).sum()
    }
}

/// Sweeps thresholds over the distinct scores in descending order; tied scores
/// move the curve in a single diagonal step.
pub fn roc_curve<T: Scalar>(scores: &[T], positives: &[bool]) -> Result<RocCurve, MetricsError> {
    if scores.len() != positives.len() {
        return Err(MetricsError::LengthMismatch { left: scores.len(), right: positives.len() });
    }
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(MetricsError::NonFiniteScore(i));
    }
    let pos = positives.iter().filter(|&&p| p).count();
    let neg = positives.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(MetricsError::DegenerateClasses);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));

    let mut points = Vec::with_capacity(scores.len() + 1);
    points.push((0.0, 0.0));
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut k = 0;
    while k < order.len() {
        let threshold = scores[order[k]];
        while k < order.len() && scores[order[k]] == threshold {
            if positives[order[k]] {
                tp += 1;
            } else {
                fp += 1;
            }
            k += 1;
        }
        points.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
    }
    Ok(RocCurve { points })
}

pub fn roc_auc<T: Scalar>(scores: &[T], positives: &[bool]) -> Result<f64, MetricsError> {
    roc_curve(scores, positives).map(|c| c.auc())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Probability a random positive outranks a random negative, ties counting half.
    fn pair_count_auc(scores: &[f64], positives: &[bool]) -> f64 {
        let mut wins = 0.0;
        let mut pairs = 0.0;
        for (i, &si) in scores.iter().enumerate() {
            for (j, &sj) in scores.iter().enumerate() {
                if positives[i] && !positives[j] {
                    pairs += 1.0;
                    if si > sj {
                        wins += 1.0;
                    } else if si == sj {
                        wins += 0.5;
                    }
                }
            }
        }
        wins / pairs
    }

    #[test]
    fn perfect_and_inverted_rankings() {
        let labels = [true, true, false, false];
        assert_eq!(roc_auc(&[0.9, 0.8, 0.2, 0.1], &labels).unwrap(), 1.0);
        assert_eq!(roc_auc(&[0.1, 0.2, 0.8, 0.9], &labels).unwrap(), 0.0);
    }

    #[test]
    fn interleaved_ranking() {
        // positives at ranks 1 and 3: pairs (0.9>0.8) (0.9>0.6) (0.7<0.8) (0.7>0.6) -> 3/4
        let scores = [0.9, 0.8, 0.7, 0.6];
        let labels = [true, false, true, false];
        assert_eq!(pair_count_auc(&scores, &labels), 0.75);
        assert_eq!(roc_auc(&scores, &labels).unwrap(), 0.75);
    }

    #[test]
    fn constant_scores_give_chance() {
        let curve = roc_curve(&[0.3f32; 5], &[true, false, false, true, false]).unwrap();
        assert_eq!(curve.points, vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(curve.auc(), 0.5);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(roc_curve(&[1.0, 2.0], &[true, true]).unwrap_err(), MetricsError::DegenerateClasses);
        assert_eq!(roc_curve(&[1.0, f64::NAN], &[true, false]).unwrap_err(), MetricsError::NonFiniteScore(1));
        assert!(matches!(roc_curve(&[1.0], &[true, false]), Err(MetricsError::LengthMismatch { .. })));
    }

    fn scored_labels() -> impl Strategy<Value = (Vec<f64>, Vec<bool>)> {
        (2usize..200).prop_flat_map(|n| {
            (proptest::collection::vec(-5i32..5, n), proptest::collection::vec(any::<bool>(), n))
                .prop_map(|(s, mut l)| {
                    l[0] = true;
                    l[1] = false;
                    (s.into_iter().map(|v| v as f64 / 2.0).collect(), l)
                })
        })
    }

    proptest! {
        #[test]
        fn trapezoid_matches_pair_counting((scores, labels) in scored_labels()) {
            let auc = roc_auc(&scores, &labels).unwrap();
            prop_assert!((auc - pair_count_auc(&scores, &labels)).abs() < 1e-12);
        }

        #[test]
        fn auc_invariant_under_monotone_transform((scores, labels) in scored_labels()) {
            let transformed: Vec<f64> = scores.iter().map(|s| (s * 0.7).exp() * 3.0 + 1.0).collect();
            prop_assert_eq!(roc_auc(&scores, &labels).unwrap(), roc_auc(&transformed, &labels).unwrap());
        }

        #[test]
        fn curve_is_monotone((scores, labels) in scored_labels()) {
            let curve = roc_curve(&scores, &labels).unwrap();
            prop_assert_eq!(curve.points[0], (0.0, 0.0));
            prop_assert_eq!(*curve.points.last().unwrap(), (1.0, 1.0));
            for w in curve.points.windows(2) {
                prop_assert!(w[1].0 >= w[0].0 && w[1].1 >= w[0].1);
            }
        }
    }
}
