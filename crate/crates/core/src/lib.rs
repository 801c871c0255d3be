//! Boosting with chance-corrected error measures.
//!
//! AdaBoost.M1 and MultiBoost normally stop, and weigh their members, by
//! weighted training accuracy. Here the error each round can instead come
//! from Cohen's kappa, Informedness, Markedness or Matthews correlation,
//! rescaled so that chance maps to one half. The crate also provides the weak
//! learners, ARFF/CSV loading and a stratified cross-validation harness.

pub mod boosting;
pub mod data;
pub mod evaluation;
pub mod learners;
pub mod metrics;

pub use boosting::{BoostConfig, BoostMode, BoostedEnsemble, StopReason};
pub use data::{Attribute, AttributeKind, DataError, Dataset, Instance, Value};
pub use evaluation::{run_repeated_cv, CvReport};
pub use learners::{LearnerKind, LearnerSpec, WeakModel};
pub use metrics::{ContingencyTable, MeasureKind, MeasureValues};
