#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SvmError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("training labels contain a single class")]
    SingleClassInput,
    #[error("need at least two training examples, got {0}")]
    TooFewExamples(usize),
    #[error("labels must be +1 or -1")]
    InvalidLabel,
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),
}
