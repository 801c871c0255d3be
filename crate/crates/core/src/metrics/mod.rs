//! Weighted contingency tables and chance-corrected measures.
//!
//! Tables are oriented gold-by-predicted. Every chance-corrected measure
//! scores 0 at chance and 1 for a perfect diagonal; degenerate marginals
//! (a class that is never present or never predicted, or always so)
//! contribute 0 rather than dividing by zero.

mod measures;
mod table;

use thiserror::Error;

pub use measures::{
    cohen_kappa, generalized_error, informedness, kappa_rescale, markedness, matthews_correlation,
    rand_accuracy, MeasureKind, MeasureValues,
};
pub use table::{per_class_stats, tabulate, ClassStats, ContingencyTable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("length mismatch: {gold} gold labels, {predicted} predictions, {weights} weights")]
    LengthMismatch { gold: usize, predicted: usize, weights: usize },
    #[error("no instances to tabulate")]
    Empty,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("weights must be finite and non-negative, got {0}")]
    InvalidWeight(f64),
    #[error("table total weight must be positive")]
    ZeroTotal,
    #[error("a contingency table needs at least 2 classes, got {0}")]
    TooFewClasses(usize),
    #[error("cells must form a {expected}x{expected} grid")]
    ShapeMismatch { expected: usize },
    #[error("kappa {0} outside [-1, 1]")]
    KappaOutOfRange(f64),
    #[error("unknown measure `{0}` (expected accuracy, kappa, informedness, markedness or matthews)")]
    UnknownMeasure(String),
}
