//! Binary soft-margin kernel SVM: kernels, feature scaling, the dual objective,
//! an SMO solver and the trained discriminant.

mod dual;
mod error;
mod kernel;
mod model;
mod scaling;
mod solver;

pub use dual::dual_objective;
pub use error::SvmError;
pub use kernel::{Gram, KernelSpec};
pub use model::{example_key, train_binary, BinarySvmModel, Discriminant, FitReport, SvmHyperparams};
pub(crate) use model::fit_prescaled;
pub use scaling::Standardizer;
pub use solver::{solve_dual, DualSolution, SolverConfig};
