//! Weighted split search shared by the stump and the tree.
//!
//! A node keeps, for every numeric attribute, its rows with a known value in
//! ascending value order, so candidate thresholds are found by one linear scan.

use serde::Serialize;

use crate::data::{AttributeKind, Dataset, Value};

/// What a split minimises: the weighted child impurity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCriterion {
    /// Misclassification: weight outside each branch's majority class.
    Error,
    /// Entropy, i.e. information gain.
    InfoGain,
    Gini,
}

impl SplitCriterion {
    /// Impurity of a branch scaled by its weight.
    pub(crate) fn weighted_impurity(self, class_weights: &[f64]) -> f64 {
        let total: f64 = class_weights.iter().map(|w| w.max(0.0)).sum();
        if total <= 0.0 {
            return 0.0;
        }
        match self {
            SplitCriterion::Error => total - class_weights.iter().fold(0.0f64, |m, &w| m.max(w)),
            SplitCriterion::InfoGain => {
                let sum_wlogw: f64 = class_weights.iter().filter(|&&w| w > 0.0).map(|&w| w * w.log2()).sum();
                (total * total.log2() - sum_wlogw).max(0.0)
            }
            SplitCriterion::Gini => {
                let sq: f64 = class_weights.iter().map(|w| w.max(0.0) * w.max(0.0)).sum();
                (total - sq / total).max(0.0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SplitRule {
    /// `x < value` goes to branch 0, otherwise branch 1. Missing values follow
    /// the branch that was heavier in training.
    Threshold { value: f64, missing_left: bool },
    /// One branch per declared value plus a final branch for missing values.
    Nominal { arity: usize },
}

impl SplitRule {
    pub fn num_branches(&self) -> usize {
        match self {
            SplitRule::Threshold { .. } => 2,
            SplitRule::Nominal { arity } => arity + 1,
        }
    }

    pub fn branch(&self, value: Value) -> usize {
        match (*self, value) {
            (SplitRule::Threshold { value: t, .. }, Value::Numeric(x)) => usize::from(x >= t),
            (SplitRule::Threshold { missing_left, .. }, _) => usize::from(!missing_left),
            (SplitRule::Nominal { arity }, Value::Nominal(v)) if v < arity => v,
            (SplitRule::Nominal { arity }, _) => arity,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Split {
    pub attribute: usize,
    pub rule: SplitRule,
    pub score: f64,
    /// Class weights reaching each branch.
    pub branch_weights: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub rows: Vec<u32>,
    pub sorted: Vec<Option<Vec<u32>>>,
}

pub(crate) struct SplitContext<'a> {
    pub data: &'a Dataset,
    pub weights: &'a [f64],
    pub num_classes: usize,
}

impl<'a> SplitContext<'a> {
    pub fn new(data: &'a Dataset, weights: &'a [f64]) -> Self {
        Self { data, weights, num_classes: data.num_classes() }
    }

    /// Root node over the rows with positive weight for which `keep` holds.
    pub fn root(&self, keep: impl Fn(usize) -> bool) -> Node {
        let member: Vec<bool> = (0..self.data.len()).map(|i| self.weights[i] > 0.0 && keep(i)).collect();
        let rows = (0..self.data.len() as u32).filter(|&i| member[i as usize]).collect();
        let presorted = self.data.sorted_columns();
        let sorted = presorted
            .columns
            .iter()
            .map(|col| col.as_ref().map(|c| c.iter().copied().filter(|&i| member[i as usize]).collect()))
            .collect();
        Node { rows, sorted }
    }

    pub fn class_weights(&self, rows: &[u32]) -> Vec<f64> {
        let mut out = vec![0.0; self.num_classes];
        for &r in rows {
            out[self.data.instances()[r as usize].label] += self.weights[r as usize];
        }
        out
    }

    fn value(&self, row: u32, attribute: usize) -> Value {
        self.data.instances()[row as usize].values[attribute]
    }

    /// Lowest-scoring split with at least two non-empty branches, of which at
    /// least two weigh `min_leaf` or more. Ties go to the lower attribute index,
    /// then to the lower threshold.
    pub fn best_split(&self, node: &Node, criterion: SplitCriterion, min_leaf: f64) -> Option<Split> {
        let node_weight: f64 = node.rows.iter().map(|&r| self.weights[r as usize]).sum();
        let eps = 1e-10 * node_weight.max(f64::MIN_POSITIVE);
        let mut best: Option<Split> = None;
        let mut consider = |cand: Split| {
            if best.as_ref().is_none_or(|b| cand.score < b.score - eps) {
                best = Some(cand);
            }
        };
        for (a, attr) in self.data.attributes().iter().enumerate() {
            match &attr.kind {
                AttributeKind::Numeric => {
                    if let Some(sorted) = node.sorted[a].as_ref() {
                        if let Some(s) = self.best_threshold(node, a, sorted, criterion, min_leaf, eps) {
                            consider(s);
                        }
                    }
                }
                AttributeKind::Nominal(values) => {
                    if let Some(s) = self.nominal_split(node, a, values.len(), criterion, min_leaf) {
                        consider(s);
                    }
                }
            }
        }
        best
    }

    fn best_threshold(
        &self,
        node: &Node,
        a: usize,
        sorted: &[u32],
        criterion: SplitCriterion,
        min_leaf: f64,
        eps: f64,
    ) -> Option<Split> {
        if sorted.len() < 2 {
            return None;
        }
        let k = self.num_classes;
        let mut missing = vec![0.0; k];
        for &r in &node.rows {
            if self.value(r, a).is_missing() {
                missing[self.data.instances()[r as usize].label] += self.weights[r as usize];
            }
        }
        let known = self.class_weights(sorted);
        let known_total: f64 = known.iter().sum();
        let mut left = vec![0.0; k];
        let mut left_total = 0.0;
        let mut best: Option<(f64, f64, bool)> = None;
        let mut lbranch = vec![0.0; k];
        let mut rbranch = vec![0.0; k];
        for pair in sorted.windows(2) {
            let (r, next) = (pair[0], pair[1]);
            let w = self.weights[r as usize];
            left[self.data.instances()[r as usize].label] += w;
            left_total += w;
            let (Value::Numeric(x), Value::Numeric(y)) = (self.value(r, a), self.value(next, a)) else {
                continue;
            };
            if !(x < y) {
                continue;
            }
            let right_total = known_total - left_total;
            let missing_left = left_total >= right_total;
            for c in 0..k {
                let right = (known[c] - left[c]).max(0.0);
                lbranch[c] = left[c] + if missing_left { missing[c] } else { 0.0 };
                rbranch[c] = right + if missing_left { 0.0 } else { missing[c] };
            }
            let lw: f64 = lbranch.iter().sum();
            let rw: f64 = rbranch.iter().sum();
            if lw < min_leaf || rw < min_leaf {
                continue;
            }
            let score = criterion.weighted_impurity(&lbranch) + criterion.weighted_impurity(&rbranch);
            if best.is_none_or(|(s, _, _)| score < s - eps) {
                let mut t = 0.5 * (x + y);
                if !(t > x) || !(t <= y) {
                    t = y;
                }
                best = Some((score, t, missing_left));
            }
        }
        let (score, value, missing_left) = best?;
        let rule = SplitRule::Threshold { value, missing_left };
        Some(Split { attribute: a, rule, score, branch_weights: self.branch_weights(&node.rows, a, &rule) })
    }

    fn nominal_split(&self, node: &Node, a: usize, arity: usize, criterion: SplitCriterion, min_leaf: f64) -> Option<Split> {
        let rule = SplitRule::Nominal { arity };
        let branch_weights = self.branch_weights(&node.rows, a, &rule);
        let totals: Vec<f64> = branch_weights.iter().map(|b| b.iter().sum()).collect();
        let nonempty = totals.iter().filter(|&&w| w > 0.0).count();
        let heavy = totals.iter().filter(|&&w| w > 0.0 && w >= min_leaf).count();
        if nonempty < 2 || heavy < 2 {
            return None;
        }
        let score = branch_weights.iter().map(|b| criterion.weighted_impurity(b)).sum();
        Some(Split { attribute: a, rule, score, branch_weights })
    }

    fn branch_weights(&self, rows: &[u32], a: usize, rule: &SplitRule) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.num_classes]; rule.num_branches()];
        for &r in rows {
            let b = rule.branch(self.value(r, a));
            out[b][self.data.instances()[r as usize].label] += self.weights[r as usize];
        }
        out
    }

    /// Splits a node's rows and sorted columns among the branches of `split`.
    pub fn partition(&self, node: &Node, split: &Split) -> Vec<Node> {
        let branches = split.rule.num_branches();
        let mut branch_of = vec![u32::MAX; self.data.len()];
        let mut children: Vec<Node> = (0..branches)
            .map(|_| Node { rows: Vec::new(), sorted: vec![None; node.sorted.len()] })
            .collect();
        for &r in &node.rows {
            let b = split.rule.branch(self.value(r, split.attribute));
            branch_of[r as usize] = b as u32;
            children[b].rows.push(r);
        }
        for (a, col) in node.sorted.iter().enumerate() {
            if let Some(col) = col {
                let mut parts: Vec<Vec<u32>> = vec![Vec::new(); branches];
                for &r in col {
                    parts[branch_of[r as usize] as usize].push(r);
                }
                for (child, part) in children.iter_mut().zip(parts) {
                    child.sorted[a] = Some(part);
                }
            }
        }
        children
    }
}
