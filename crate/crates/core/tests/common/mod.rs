//! Independent reference implementations and fixtures shared by the
//! integration tests.
#![allow(dead_code)]

pub mod invariants;

use std::path::PathBuf;

use adabook::data::{load_arff, Attribute, Dataset, Instance, Value};

pub fn data_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file)
}

pub fn load(file: &str) -> Dataset {
    load_arff(data_path(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

/// One-vs-rest counts for class `c` of a gold-by-predicted table.
fn dichotomy(t: &[Vec<f64>], c: usize) -> (f64, f64, f64, f64) {
    let k = t.len();
    let (mut tp, mut fn_, mut fp, mut tn) = (0.0, 0.0, 0.0, 0.0);
    for g in 0..k {
        for p in 0..k {
            match (g == c, p == c) {
                (true, true) => tp += t[g][p],
                (true, false) => fn_ += t[g][p],
                (false, true) => fp += t[g][p],
                (false, false) => tn += t[g][p],
            }
        }
    }
    (tp, fn_, fp, tn)
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        0.0
    }
}

pub fn oracle_kappa(t: &[Vec<f64>]) -> f64 {
    let k = t.len();
    let n: f64 = t.iter().flatten().sum();
    let po: f64 = (0..k).map(|i| t[i][i]).sum::<f64>() / n;
    let pe: f64 = (0..k)
        .map(|i| {
            let row: f64 = t[i].iter().sum();
            let col: f64 = t.iter().map(|r| r[i]).sum();
            row * col / (n * n)
        })
        .sum();
    if 1.0 - pe < 1e-12 {
        0.0
    } else {
        (po - pe) / (1.0 - pe)
    }
}

/// Bias-weighted sum of one-vs-rest `tpr - fpr`.
pub fn oracle_informedness(t: &[Vec<f64>]) -> f64 {
    let n: f64 = t.iter().flatten().sum();
    (0..t.len())
        .map(|c| {
            let (tp, fn_, fp, tn) = dichotomy(t, c);
            let pos = tp + fn_;
            let neg = fp + tn;
            if pos == 0.0 || neg == 0.0 {
                return 0.0;
            }
            ((tp + fp) / n) * (tp / pos - fp / neg)
        })
        .sum()
}

/// Prevalence-weighted sum of one-vs-rest `ppv + npv - 1`.
pub fn oracle_markedness(t: &[Vec<f64>]) -> f64 {
    let n: f64 = t.iter().flatten().sum();
    (0..t.len())
        .map(|c| {
            let (tp, fn_, fp, tn) = dichotomy(t, c);
            let pp = tp + fp;
            let pn = fn_ + tn;
            if pp == 0.0 || pn == 0.0 {
                return 0.0;
            }
            ((tp + fn_) / n) * (ratio(tp, pp) + ratio(tn, pn) - 1.0)
        })
        .sum()
}

/// Determinant form of the 2x2 correlation; `None` where a marginal is empty.
pub fn oracle_matthews_2x2(t: &[Vec<f64>]) -> Option<f64> {
    let (tp, fn_, fp, tn) = (t[0][0], t[0][1], t[1][0], t[1][1]);
    let d = (tp + fn_) * (fp + tn) * (tp + fp) * (fn_ + tn);
    (d > 0.0).then(|| (tp * tn - fp * fn_) / d.sqrt())
}

/// `n` rows of one constant attribute, the first `majority` labelled class 0.
pub fn constant_fixture(n: usize, majority: usize) -> Dataset {
    Dataset::new(
        "constant",
        vec![Attribute::numeric("x")],
        "class",
        vec!["maj".into(), "min".into()],
        (0..n).map(|i| Instance::new(vec![Value::Numeric(1.0)], usize::from(i >= majority))).collect(),
    )
    .unwrap()
}

/// The 6-instance fixture whose best stump misclassifies exactly x = 5.
pub fn six_instances() -> Dataset {
    let xs = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let labels = [0, 0, 0, 1, 0, 1];
    Dataset::new(
        "six",
        vec![Attribute::numeric("x")],
        "class",
        vec!["A".into(), "B".into()],
        xs.iter().zip(labels).map(|(&x, l)| Instance::new(vec![Value::Numeric(x)], l)).collect(),
    )
    .unwrap()
}
