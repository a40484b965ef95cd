//! Exact rational scalars, vectors, matrices, and measurement superoperators.
//!
//! All values are immutable after construction and safe to share across
//! threads. Weights of measurement outcomes are always exact rationals; the
//! workbench never materializes normalized state vectors (their norms are
//! square roots), carrying unconditional vectors and squared norms instead.

mod linear;
mod rational;
mod superop;

pub use linear::{normalize, CanonicalVec, QMatrix, QVector};
pub use rational::Rational;
pub use superop::{Outcome, Superoperator};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("operation elements differ in size: expected {expected}x{expected}, found {found}x{found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("not a rational literal: {0:?} (use \"p/q\" or \"p\")")]
    BadRational(String),
    #[error("vectors must have dimension >= 1")]
    EmptyVector,
    #[error("matrices must have dimension >= 1")]
    EmptyMatrix,
    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },
    #[error("a superoperator needs at least one operation element")]
    NoElements,
}
