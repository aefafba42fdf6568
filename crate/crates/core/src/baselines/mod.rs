//! Comparison classifiers sharing the [`Classifier`] interface with the tuned SVM.

mod knn;
mod logreg;
mod naive_bayes;
mod tree;

pub use knn::KnnModel;
pub use logreg::{loss_and_gradient, LogRegModel, LogRegParams};
pub use naive_bayes::GaussianNbModel;
pub use tree::{DecisionTreeModel, TreeNode};

use serde::{Deserialize, Serialize};

use crate::classifier::{Classifier, DimensionMismatch};
use crate::herd::{Dataset, DiseaseLabel, NUM_CLASSES, NUM_FEATURES};
use crate::ovr::{train_ovr, MulticlassSvmModel, OvrError};
use crate::svm::{SolverConfig, Standardizer, SvmError, SvmHyperparams};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BaselineError {
    #[error("training data contains fewer than two classes")]
    SingleClassInput,
    #[error("invalid baseline parameters: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Ovr(#[from] OvrError),
    #[error(transparent)]
    Svm(#[from] SvmError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaselineSpec {
    /// One-vs-rest RBF SVM with `C = 1`, `gamma = 1 / P`.
    Ssvm,
    Knn { k: usize },
    LogReg { learning_rate: f64, epochs: usize, l2: f64 },
    GaussianNb { var_smoothing: f64 },
    DecisionTree { max_depth: usize, min_samples_leaf: usize },
}

impl BaselineSpec {
    pub fn knn() -> Self {
        Self::Knn { k: 5 }
    }

    pub fn log_reg() -> Self {
        let p = LogRegParams::default();
        Self::LogReg { learning_rate: p.learning_rate, epochs: p.epochs, l2: p.l2 }
    }

    pub fn gaussian_nb() -> Self {
        Self::GaussianNb { var_smoothing: 1e-9 }
    }

    pub fn decision_tree() -> Self {
        Self::DecisionTree { max_depth: 8, min_samples_leaf: 1 }
    }

    /// The five baselines with default parameters.
    pub fn defaults() -> [Self; 5] {
        [Self::Ssvm, Self::knn(), Self::log_reg(), Self::gaussian_nb(), Self::decision_tree()]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Ssvm => "ssvm",
            Self::Knn { .. } => "knn",
            Self::LogReg { .. } => "logreg",
            Self::GaussianNb { .. } => "gaussian_nb",
            Self::DecisionTree { .. } => "decision_tree",
        }
    }

    pub fn check(&self) -> Result<(), BaselineError> {
        let bad = |m: String| Err(BaselineError::InvalidSpec(m));
        match *self {
            Self::Ssvm => Ok(()),
            Self::Knn { k } if k == 0 || k % 2 == 0 => bad(format!("k must be odd and positive, got {k}")),
            Self::LogReg { epochs: 0, .. } => bad("epochs must be positive".into()),
            Self::LogReg { learning_rate, l2, .. } if !(learning_rate > 0.0) || !(l2 >= 0.0) => {
                bad(format!("learning_rate must be positive and l2 non-negative, got {learning_rate}, {l2}"))
            }
            Self::GaussianNb { var_smoothing } if !(var_smoothing > 0.0) => {
                bad(format!("var_smoothing must be positive, got {var_smoothing}"))
            }
            Self::DecisionTree { max_depth: 0, .. } => bad("max_depth must be at least 1".into()),
            Self::DecisionTree { min_samples_leaf: 0, .. } => bad("min_samples_leaf must be at least 1".into()),
            _ => Ok(()),
        }
    }
}

pub fn ssvm_hyperparams(dim: usize) -> SvmHyperparams<f64> {
    SvmHyperparams::rbf(1.0, 1.0 / dim as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaselineModel {
    Ssvm(MulticlassSvmModel<f64>),
    Knn(KnnModel),
    LogReg(LogRegModel),
    GaussianNb(GaussianNbModel),
    DecisionTree(DecisionTreeModel),
}

pub fn train_baseline(spec: &BaselineSpec, train: &Dataset, seed: u64) -> Result<BaselineModel, BaselineError> {
    train_baseline_rows(spec, &train.feature_rows(), &train.labels(), seed)
}

pub fn train_baseline_rows(
    spec: &BaselineSpec,
    rows: &[Vec<f64>],
    labels: &[DiseaseLabel],
    seed: u64,
) -> Result<BaselineModel, BaselineError> {
    spec.check()?;
    if rows.len() != labels.len() {
        return Err(SvmError::DimensionMismatch { expected: rows.len(), found: labels.len() }.into());
    }
    let classes: Vec<usize> = labels.iter().map(|l| l.index()).collect();
    let mut seen = [false; NUM_CLASSES];
    for &c in &classes {
        seen[c] = true;
    }
    if seen.iter().filter(|&&s| s).count() < 2 {
        return Err(BaselineError::SingleClassInput);
    }
    if let BaselineSpec::Ssvm = spec {
        let dim = rows.first().map_or(NUM_FEATURES, Vec::len);
        let model = train_ovr(rows, labels, &ssvm_hyperparams(dim), &SolverConfig::default(), seed)?;
        return Ok(BaselineModel::Ssvm(model));
    }
    let scaling = Standardizer::fit(rows)?;
    let scaled = scaling.transform_all(rows)?;
    Ok(match *spec {
        BaselineSpec::Ssvm => unreachable!("handled above"),
        BaselineSpec::Knn { k } => BaselineModel::Knn(KnnModel::fit(scaling, scaled, &classes, k, seed)),
        BaselineSpec::LogReg { learning_rate, epochs, l2 } => {
            BaselineModel::LogReg(LogRegModel::fit(scaling, &scaled, &classes, &LogRegParams { learning_rate, epochs, l2 }))
        }
        BaselineSpec::GaussianNb { var_smoothing } => {
            BaselineModel::GaussianNb(GaussianNbModel::fit(scaling, &scaled, &classes, var_smoothing))
        }
        BaselineSpec::DecisionTree { max_depth, min_samples_leaf } => {
            BaselineModel::DecisionTree(DecisionTreeModel::fit(scaling, &scaled, &classes, max_depth, min_samples_leaf))
        }
    })
}

impl BaselineModel {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Ssvm(_) => "ssvm",
            Self::Knn(_) => "knn",
            Self::LogReg(_) => "logreg",
            Self::GaussianNb(_) => "gaussian_nb",
            Self::DecisionTree(_) => "decision_tree",
        }
    }

    /// Structural checks used when a model is loaded from disk.
    pub fn check(&self) -> Result<(), String> {
        let scaling = match self {
            Self::Ssvm(m) => return m.check().map_err(|e| e.to_string()),
            Self::Knn(m) => &m.scaling,
            Self::LogReg(m) => &m.scaling,
            Self::GaussianNb(m) => &m.scaling,
            Self::DecisionTree(m) => &m.scaling,
        };
        let dim = scaling.dim();
        if scaling.stddev.len() != dim || scaling.stddev.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err("invalid scaling statistics".into());
        }
        let fail = |what: &str| Err(format!("{}: {what}", self.name()));
        match self {
            Self::Ssvm(_) => unreachable!("checked above"),
            Self::Knn(m) => {
                if m.k == 0 || m.k % 2 == 0 {
                    return fail("k must be odd");
                }
                if m.points.len() != m.classes.len() || m.points.len() != m.keys.len() || m.points.is_empty() {
                    return fail("point, class and key counts differ");
                }
                if m.points.iter().any(|p| p.len() != dim) || m.classes.iter().any(|&c| c >= NUM_CLASSES) {
                    return fail("stored point out of shape");
                }
            }
            Self::LogReg(m) => {
                if m.weights.len() != NUM_CLASSES * (dim + 1) || m.weights.iter().any(|w| !w.is_finite()) {
                    return fail("weight matrix out of shape");
                }
            }
            Self::GaussianNb(m) => {
                if m.log_prior.len() != NUM_CLASSES || m.means.len() != NUM_CLASSES || m.variances.len() != NUM_CLASSES {
                    return fail("per-class tables must have 13 rows");
                }
                let bad_row = |r: &Vec<f64>| r.len() != dim;
                if m.means.iter().any(bad_row) || m.variances.iter().any(bad_row) {
                    return fail("per-class row out of shape");
                }
                if m.variances.iter().flatten().any(|&v| !(v > 0.0 && v.is_finite())) {
                    return fail("variances must be positive");
                }
            }
            Self::DecisionTree(m) => {
                if m.nodes.is_empty() {
                    return fail("empty tree");
                }
                for (i, node) in m.nodes.iter().enumerate() {
                    match node {
                        TreeNode::Leaf { frequencies } if frequencies.len() != NUM_CLASSES => return fail("leaf arity"),
                        TreeNode::Split { feature, left, right, .. }
                            if *feature >= dim || *left <= i || *right <= i || *left >= m.nodes.len() || *right >= m.nodes.len() =>
                        {
                            return fail("split references an invalid feature or child")
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }

    fn inner(&self) -> &dyn Classifier {
        match self {
            Self::Ssvm(m) => m,
            Self::Knn(m) => m,
            Self::LogReg(m) => m,
            Self::GaussianNb(m) => m,
            Self::DecisionTree(m) => m,
        }
    }
}

impl Classifier for BaselineModel {
    fn dim(&self) -> usize {
        self.inner().dim()
    }

    fn scores(&self, x: &[f64]) -> Result<[f64; NUM_CLASSES], DimensionMismatch> {
        self.inner().scores(x)
    }
}
