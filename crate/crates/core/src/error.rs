use std::fmt;

use thiserror::Error;

/// Named constraint of the 2×2 parametric family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleConstraint {
    Positivity,
    Dominance,
    ColumnOrder,
    Contraction,
}

impl fmt::Display for ExampleConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExampleConstraint::Positivity => "positivity violated (A, B, C, D, lambda must be >= 0)",
            ExampleConstraint::Dominance => "dominance violated (lambda must be <= B)",
            ExampleConstraint::ColumnOrder => "column order violated (B + D must be <= A + C)",
            ExampleConstraint::Contraction => "contraction violated (A + C must be <= 1)",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operands live on different spaces")]
    SpaceMismatch,

    #[error("operator is not positive")]
    NotPositive,

    #[error("pair is not dominated: S - T has a negative entry at ({row}, {col})")]
    NotDominated { row: usize, col: usize },

    #[error("vector is not positive: coordinate {index} is negative")]
    NegativeVector { index: usize },

    #[error("{which} is not a contraction (norm {norm})")]
    NotContraction { which: &'static str, norm: String },

    #[error("{0}")]
    Example(ExampleConstraint),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
