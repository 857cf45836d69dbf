use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("failed to parse polynomial: {0}")]
    Parse(String),

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("filter numerator must be nonzero")]
    SingularFilter,

    #[error("branch count must be at least 2, got {0}")]
    BranchCount(u32),

    #[error("filter does not satisfy the QMF condition")]
    NotQmf,

    #[error("expected a real-coefficient polynomial, found complex coefficient at index {0}")]
    ComplexCoefficient(i64),

    #[error("cannot combine cell functions with half-scales {0} and {1} of different parity")]
    ScaleParity(i32, i32),

    #[error("refinement target level {target} is below current level {level}")]
    RefineBelow { level: u32, target: u32 },

    #[error("truncation K = {0} is too small (need K >= 2)")]
    TruncationTooSmall(i64),

    #[error("growth step n = {n} violates the truncation guard 2*3^n <= K/3 for K = {k}")]
    TruncationGuard { n: u32, k: i64 },

    #[error("preimage tree of depth {depth} has {leaves} leaves, above the budget of {budget}")]
    TreeBudget { depth: u32, leaves: u128, budget: u128 },

    #[error("transition weights sum to 1 {defect:+e} before renormalization; the filter is not a QMF")]
    WeightDefect { defect: f64 },

    #[error("operation requires m0 = 1")]
    FilterNotTrivial,

    #[error("component {component} out of range for a system with {count} components")]
    Component { component: usize, count: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
