//! Expected shapes of the benchmark datasets, used to check that a file on
//! disk is the one an experiment thinks it is.

use serde::Serialize;

use super::Dataset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DatasetDescriptor {
    pub name: &'static str,
    pub classes: usize,
    /// Attribute count as published. Excludes the class unless
    /// `class_counted_in_attributes` is set.
    pub attributes: usize,
    pub instances: usize,
    /// Conventional file name inside a data directory.
    pub file_name: &'static str,
    pub class_counted_in_attributes: bool,
}

const fn entry(name: &'static str, classes: usize, attributes: usize, instances: usize, file_name: &'static str) -> DatasetDescriptor {
    DatasetDescriptor { name, classes, attributes, instances, file_name, class_counted_in_attributes: false }
}

static REGISTRY: [DatasetDescriptor; 7] = [
    entry("handwritten", 10, 256, 1593, "handwritten.arff"),
    entry("isolet", 26, 617, 7797, "isolet.arff"),
    entry("letter", 26, 16, 20000, "letter.arff"),
    entry("optdigits.tra", 10, 64, 3823, "optdigits.tra.arff"),
    // Published as 17 attributes; the UCI file has 16 features plus the class.
    DatasetDescriptor {
        name: "pendigits.tra",
        classes: 10,
        attributes: 17,
        instances: 7494,
        file_name: "pendigits.tra.arff",
        class_counted_in_attributes: true,
    },
    entry("vowel", 11, 13, 990, "vowel.arff"),
    entry("iris", 3, 4, 150, "iris.arff"),
];

pub fn registry() -> &'static [DatasetDescriptor] {
    &REGISTRY
}

/// Case-insensitive lookup by name.
pub fn descriptor(name: &str) -> Option<&'static DatasetDescriptor> {
    REGISTRY.iter().find(|d| d.name.eq_ignore_ascii_case(name))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub field: &'static str,
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub dataset: String,
    pub mismatches: Vec<Mismatch>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares class, attribute and instance counts against a descriptor.
pub fn validate(data: &Dataset, descriptor: &DatasetDescriptor) -> ValidationReport {
    let mut mismatches = Vec::new();
    let mut notes = Vec::new();
    let mut check = |field, expected, found| {
        if expected != found {
            mismatches.push(Mismatch { field, expected, found });
        }
    };
    check("classes", descriptor.classes, data.num_classes());
    let attributes = data.num_attributes() + usize::from(descriptor.class_counted_in_attributes);
    check("attributes", descriptor.attributes, attributes);
    check("instances", descriptor.instances, data.len());
    if descriptor.class_counted_in_attributes {
        notes.push(format!(
            "published attribute count {} includes the class column ({} features + class)",
            descriptor.attributes,
            data.num_attributes()
        ));
    }
    ValidationReport { dataset: descriptor.name.to_string(), mismatches, notes }
}
