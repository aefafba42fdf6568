#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("no examples to evaluate")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ROC needs at least one positive and one negative example")]
    DegenerateClasses,
    #[error("class index {index} outside 0..{classes}")]
    LabelOutOfRange { index: usize, classes: usize },
    #[error("score at position {0} is not finite")]
    NonFiniteScore(usize),
}
