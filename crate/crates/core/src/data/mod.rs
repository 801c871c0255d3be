//! Datasets with nominal or numeric attributes and a nominal class.

mod arff;
mod csv;
mod registry;

use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

pub use self::arff::{load_arff, parse_arff, to_arff, ArffLoad};
pub use self::csv::{load_csv, parse_csv, ClassColumn};
pub use self::registry::{descriptor, registry, validate, DatasetDescriptor, Mismatch, ValidationReport};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid dataset: {0}")]
    Invalid(String),
}

impl DataError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        DataError::Parse { line, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AttributeKind {
    Numeric,
    Nominal(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn numeric(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: AttributeKind::Numeric }
    }

    pub fn nominal<S: Into<String>>(name: impl Into<String>, values: impl IntoIterator<Item = S>) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Nominal(values.into_iter().map(Into::into).collect()),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.kind, AttributeKind::Numeric)
    }

    /// Number of declared nominal values, 0 for numeric attributes.
    pub fn arity(&self) -> usize {
        match &self.kind {
            AttributeKind::Numeric => 0,
            AttributeKind::Nominal(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Value {
    Numeric(f64),
    Nominal(usize),
    Missing,
}

impl Value {
    pub fn is_missing(self) -> bool {
        matches!(self, Value::Missing)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    pub values: Vec<Value>,
    pub label: usize,
    pub weight: f64,
}

impl Instance {
    pub fn new(values: Vec<Value>, label: usize) -> Self {
        Self { values, label, weight: 1.0 }
    }
}

/// Per numeric attribute, the indices of instances with a known value, sorted by
/// that value. Nominal attributes get `None`.
#[derive(Debug)]
pub(crate) struct SortedColumns {
    pub(crate) columns: Vec<Option<Vec<u32>>>,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    relation: String,
    attributes: Vec<Attribute>,
    class_name: String,
    classes: Vec<String>,
    instances: Vec<Instance>,
    sorted: OnceLock<Arc<SortedColumns>>,
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.relation == other.relation
            && self.attributes == other.attributes
            && self.class_name == other.class_name
            && self.classes == other.classes
            && self.instances == other.instances
    }
}

impl Dataset {
    pub fn new(
        relation: impl Into<String>,
        attributes: Vec<Attribute>,
        class_name: impl Into<String>,
        classes: Vec<String>,
        instances: Vec<Instance>,
    ) -> Result<Self, DataError> {
        if classes.len() < 2 {
            return Err(DataError::Invalid(format!("need at least 2 classes, got {}", classes.len())));
        }
        if has_duplicates(&classes) {
            return Err(DataError::Invalid("duplicate class names".into()));
        }
        for attr in &attributes {
            if let AttributeKind::Nominal(values) = &attr.kind {
                if values.is_empty() {
                    return Err(DataError::Invalid(format!("nominal attribute `{}` has no values", attr.name)));
                }
                if has_duplicates(values) {
                    return Err(DataError::Invalid(format!("nominal attribute `{}` repeats a value", attr.name)));
                }
            }
        }
        if instances.is_empty() {
            return Err(DataError::Invalid("no instances".into()));
        }
        let mut total = 0.0;
        for (i, inst) in instances.iter().enumerate() {
            if inst.values.len() != attributes.len() {
                return Err(DataError::Invalid(format!(
                    "instance {i} has {} values, schema has {}",
                    inst.values.len(),
                    attributes.len()
                )));
            }
            if inst.label >= classes.len() {
                return Err(DataError::Invalid(format!("instance {i} has class index {}", inst.label)));
            }
            if !(inst.weight >= 0.0 && inst.weight.is_finite()) {
                return Err(DataError::Invalid(format!("instance {i} has weight {}", inst.weight)));
            }
            total += inst.weight;
            for (value, attr) in inst.values.iter().zip(&attributes) {
                let ok = match (value, &attr.kind) {
                    (Value::Missing, _) => true,
                    (Value::Numeric(x), AttributeKind::Numeric) => x.is_finite(),
                    (Value::Nominal(v), AttributeKind::Nominal(values)) => *v < values.len(),
                    _ => false,
                };
                if !ok {
                    return Err(DataError::Invalid(format!(
                        "instance {i}: value {value:?} does not fit attribute `{}`",
                        attr.name
                    )));
                }
            }
        }
        if total <= 0.0 {
            return Err(DataError::Invalid("total instance weight is zero".into()));
        }
        Ok(Self {
            relation: relation.into(),
            attributes,
            class_name: class_name.into(),
            classes,
            instances,
            sorted: OnceLock::new(),
        })
    }

    pub fn relation(&self) -> &str {
        &self.relation
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn class_name(&self) -> &str {
        &self.class_name
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn num_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.instances.iter().map(|i| i.label).collect()
    }

    /// The per-instance weights stored in the dataset.
    pub fn instance_weights(&self) -> Vec<f64> {
        self.instances.iter().map(|i| i.weight).collect()
    }

    /// Weighted class totals under `weights`.
    pub fn class_weights(&self, weights: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.num_classes()];
        for (inst, w) in self.instances.iter().zip(weights) {
            out[inst.label] += w;
        }
        out
    }

    /// Class with the largest stored instance weight, lowest index on ties.
    pub fn majority_class(&self) -> usize {
        crate::learners::argmax(&self.class_weights(&self.instance_weights()))
    }

    /// The same dataset with every instance weight set to 1.
    pub fn with_unit_weights(mut self) -> Self {
        self.instances.iter_mut().for_each(|i| i.weight = 1.0);
        self
    }

    /// A new dataset holding the given instances, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self, DataError> {
        Self::new(
            self.relation.clone(),
            self.attributes.clone(),
            self.class_name.clone(),
            self.classes.clone(),
            indices.iter().map(|&i| self.instances[i].clone()).collect(),
        )
    }

    pub(crate) fn sorted_columns(&self) -> Arc<SortedColumns> {
        self.sorted
            .get_or_init(|| {
                let columns = self
                    .attributes
                    .iter()
                    .enumerate()
                    .map(|(a, attr)| {
                        attr.is_numeric().then(|| {
                            let mut idx: Vec<(f64, u32)> = self
                                .instances
                                .iter()
                                .enumerate()
                                .filter_map(|(i, inst)| match inst.values[a] {
                                    Value::Numeric(x) => Some((x, i as u32)),
                                    _ => None,
                                })
                                .collect();
                            idx.sort_by(|l, r| l.0.total_cmp(&r.0).then(l.1.cmp(&r.1)));
                            idx.into_iter().map(|(_, i)| i).collect()
                        })
                    })
                    .collect();
                Arc::new(SortedColumns { columns })
            })
            .clone()
    }
}

fn has_duplicates(values: &[String]) -> bool {
    let mut seen = std::collections::HashSet::new();
    values.iter().any(|v| !seen.insert(v.as_str()))
}
