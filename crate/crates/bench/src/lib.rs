//! Synthetic workloads for the benchmarks.

use adabook::data::{Attribute, Dataset, Instance, Value};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` instances over `attrs` numeric attributes and `classes` classes.
///
/// Each class shifts the attribute means, so the data is learnable but
/// overlapping.
pub fn synthetic(n: usize, attrs: usize, classes: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attributes = (0..attrs).map(|a| Attribute::numeric(format!("x{a}"))).collect();
    let instances = (0..n)
        .map(|i| {
            let label = i % classes;
            let values = (0..attrs)
                .map(|a| Value::Numeric(((label + a) % classes) as f64 + rng.gen_range(-1.5..1.5)))
                .collect();
            Instance::new(values, label)
        })
        .collect();
    let names = (0..classes).map(|c| format!("c{c}")).collect();
    Dataset::new("synthetic", attributes, "class", names, instances).expect("valid synthetic dataset")
}

/// Uniform weights summing to one.
pub fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}
