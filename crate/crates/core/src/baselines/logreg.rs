use serde::{Deserialize, Serialize};

use crate::classifier::{check_dim, Classifier, DimensionMismatch};
use crate::herd::NUM_CLASSES;
use crate::svm::Standardizer;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegParams {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
}

impl Default for LogRegParams {
    fn default() -> Self {
        Self { learning_rate: 0.1, epochs: 500, l2: 1e-3 }
    }
}

/// Multinomial logistic regression fitted by full-batch gradient descent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub scaling: Standardizer<f64>,
    /// Row-major `NUM_CLASSES x (dim + 1)`; the last column of each row is the intercept.
    pub weights: Vec<f64>,
    /// Training objective before the first and after every epoch.
    pub loss_history: Vec<f64>,
}

fn softmax_in_place(logits: &mut [f64]) {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for v in logits.iter_mut() {
        *v = (*v - max).exp();
        total += *v;
    }
    for v in logits.iter_mut() {
        *v /= total;
    }
}

fn logits(weights: &[f64], z: &[f64], out: &mut [f64]) {
    let stride = z.len() + 1;
    for (k, o) in out.iter_mut().enumerate() {
        let w = &weights[k * stride..(k + 1) * stride];
        *o = w[..z.len()].iter().zip(z).map(|(a, b)| a * b).sum::<f64>() + w[z.len()];
    }
}

/// Mean cross-entropy plus `l2 / 2 * |W|^2` (intercepts unpenalised), and its gradient in the layout of `weights`.
pub fn loss_and_gradient(weights: &[f64], rows: &[Vec<f64>], classes: &[usize], l2: f64) -> (f64, Vec<f64>) {
    let dim = rows.first().map_or(0, Vec::len);
    let stride = dim + 1;
    assert_eq!(weights.len(), NUM_CLASSES * stride, "weight layout");
    let n = rows.len() as f64;
    let mut grad = vec![0.0; weights.len()];
    let mut loss = 0.0;
    let mut p = [0.0; NUM_CLASSES];
    for (z, &y) in rows.iter().zip(classes) {
        logits(weights, z, &mut p);
        let max = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + p.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        loss += lse - p[y];
        softmax_in_place(&mut p);
        for k in 0..NUM_CLASSES {
            let r = (p[k] - if k == y { 1.0 } else { 0.0 }) / n;
            let g = &mut grad[k * stride..(k + 1) * stride];
            for (gd, zd) in g[..dim].iter_mut().zip(z) {
                *gd += r * zd;
            }
            g[dim] += r;
        }
    }
    loss /= n;
    for k in 0..NUM_CLASSES {
        for d in 0..dim {
            let w = weights[k * stride + d];
            loss += 0.5 * l2 * w * w;
            grad[k * stride + d] += l2 * w;
        }
    }
    (loss, grad)
}

impl LogRegModel {
    pub(crate) fn fit(scaling: Standardizer<f64>, scaled: &[Vec<f64>], classes: &[usize], params: &LogRegParams) -> Self {
        let stride = scaling.dim() + 1;
        let mut weights = vec![0.0; NUM_CLASSES * stride];
        let mut loss_history = Vec::with_capacity(params.epochs + 1);
        for _ in 0..params.epochs {
            let (loss, grad) = loss_and_gradient(&weights, scaled, classes, params.l2);
            loss_history.push(loss);
            for (w, g) in weights.iter_mut().zip(&grad) {
                *w -= params.learning_rate * g;
            }
        }
        loss_history.push(loss_and_gradient(&weights, scaled, classes, params.l2).0);
        Self { scaling, weights, loss_history }
    }
}

impl Classifier for LogRegModel {
    fn dim(&self) -> usize {
        self.scaling.dim()
    }

    /// Softmax class probabilities.
    fn scores(&self, x: &[f64]) -> Result<[f64; NUM_CLASSES], DimensionMismatch> {
        check_dim(self.dim(), x)?;
        let z = self.scaling.transform(x).expect("dimension checked");
        let mut p = [0.0; NUM_CLASSES];
        logits(&self.weights, &z, &mut p);
        softmax_in_place(&mut p);
        Ok(p)
    }
}
