use thiserror::Error;

use crate::ensembles::TreeKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bound D = {bound} is below the minimum {min} for {kind} trees")]
    BoundTooSmall {
        kind: TreeKind,
        bound: usize,
        min: usize,
    },
    #[error("bad energy table: {0}")]
    BadEnergyTable(String),
    #[error("class counts sum to {actual}, expected {expected}")]
    SumMismatch { expected: u64, actual: u64 },
    #[error("dynamic-programming table of {cells} cells exceeds the budget of {budget}")]
    SizeOverflow { cells: u128, budget: u128 },
    #[error("no tree on {n} vertices satisfies the degree bound")]
    NoFeasibleTree { n: usize },
    #[error("lattice has {size} points, above the cap of {cap}")]
    LatticeTooLarge { size: u128, cap: u128 },
    #[error("operation requires {expected} trees, got {actual}")]
    KindMismatch {
        expected: TreeKind,
        actual: TreeKind,
    },
    #[error("frequency vector is off the constraint manifold (sum residual {sum_residual:e}, mean residual {mean_residual:e})")]
    OffManifold {
        sum_residual: f64,
        mean_residual: f64,
    },
    #[error("label {label} outside 1..={n}")]
    BadLabel { label: usize, n: usize },
    #[error("Pruefer code for {n} vertices must have length {expected}, got {actual}")]
    BadCodeLength {
        n: usize,
        expected: usize,
        actual: usize,
    },
    #[error("edge list does not form a tree: {0}")]
    NotATree(String),
    #[error("step word sums to {0}, expected -1")]
    BadStepSum(i64),
    #[error("enumeration size {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },
    #[error("class {class} exceeds the bound D = {bound}")]
    DegreeBoundExceeded { class: usize, bound: usize },
    #[error("dimension mismatch: expected {expected} classes, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}
