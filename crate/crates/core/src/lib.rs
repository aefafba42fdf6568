//! Multi-disease dairy cow health classification with a GA-tuned RBF SVM.

pub mod baselines;
pub mod classifier;
pub mod ga;
pub mod herd;
pub mod metrics;
pub mod ovr;
pub mod rng;
pub mod scalar;
pub mod sim;
pub mod svm;
pub mod telemetry;

pub use scalar::Scalar;

pub type SvmModel = svm::BinarySvmModel<f64>;
pub type SvmModelF32 = svm::BinarySvmModel<f32>;
pub type MulticlassModel = ovr::MulticlassSvmModel<f64>;
pub type MulticlassModelF32 = ovr::MulticlassSvmModel<f32>;
pub type Hyperparams = svm::SvmHyperparams<f64>;
pub type Kernel = svm::KernelSpec<f64>;
