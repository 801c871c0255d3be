use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::split::{Node, SplitContext, SplitCriterion, SplitRule};
use super::{argmax, checked_weights, LearnerError, WeakModel};
use crate::data::{Dataset, Value};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreeParams {
    pub criterion: SplitCriterion,
    /// `None` grows until nodes are pure or too light to split.
    pub max_depth: Option<usize>,
    /// Minimum weight, in instance units, of at least two branches of a split.
    pub min_leaf_weight: f64,
    /// Fraction of the instances held out for reduced-error pruning; 0 disables it.
    pub prune_fraction: f64,
}

impl TreeParams {
    /// Information gain with a third of the data held out for pruning.
    pub fn rep_tree() -> Self {
        Self { criterion: SplitCriterion::InfoGain, max_depth: None, min_leaf_weight: 2.0, prune_fraction: 1.0 / 3.0 }
    }

    /// Gini splits, same pruning as [`TreeParams::rep_tree`].
    pub fn cart() -> Self {
        Self { criterion: SplitCriterion::Gini, ..Self::rep_tree() }
    }

    pub fn unpruned(self) -> Self {
        Self { prune_fraction: 0.0, ..self }
    }

    fn validate(&self) -> Result<(), LearnerError> {
        if !(0.0..1.0).contains(&self.prune_fraction) {
            return Err(LearnerError::InvalidParams(format!("prune_fraction {} not in [0, 1)", self.prune_fraction)));
        }
        if !(self.min_leaf_weight >= 0.0 && self.min_leaf_weight.is_finite()) {
            return Err(LearnerError::InvalidParams(format!("min_leaf_weight {}", self.min_leaf_weight)));
        }
        Ok(())
    }
}

impl Default for TreeParams {
    fn default() -> Self {
        Self::rep_tree()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TreeNode {
    Leaf { class: usize },
    Internal {
        attribute: usize,
        rule: SplitRule,
        /// Training majority at this node, used when pruning.
        majority: usize,
        children: Vec<TreeNode>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tree {
    pub root: TreeNode,
}

impl Tree {
    pub fn predict(&self, values: &[Value]) -> usize {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { class } => return *class,
                TreeNode::Internal { attribute, rule, children, .. } => node = &children[rule.branch(values[*attribute])],
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn depth(n: &TreeNode) -> usize {
            match n {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Internal { children, .. } => 1 + children.iter().map(depth).max().unwrap_or(0),
            }
        }
        depth(&self.root)
    }

    pub fn num_leaves(&self) -> usize {
        fn leaves(n: &TreeNode) -> usize {
            match n {
                TreeNode::Leaf { .. } => 1,
                TreeNode::Internal { children, .. } => children.iter().map(leaves).sum(),
            }
        }
        leaves(&self.root)
    }
}

/// Greedy top-down induction on weighted instances, optionally followed by
/// reduced-error pruning on a seeded holdout.
pub fn train_tree(data: &Dataset, weights: &[f64], params: &TreeParams, seed: u64) -> Result<WeakModel, LearnerError> {
    params.validate()?;
    let weights = checked_weights(data, weights)?;
    let ctx = SplitContext::new(data, &weights);

    let mut positive: Vec<usize> = (0..data.len()).filter(|&i| weights[i] > 0.0).collect();
    let holdout_len = if params.prune_fraction > 0.0 {
        ((params.prune_fraction * positive.len() as f64).round() as usize).min(positive.len().saturating_sub(1))
    } else {
        0
    };
    let mut in_holdout = vec![false; data.len()];
    if holdout_len > 0 {
        positive.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        for &i in &positive[positive.len() - holdout_len..] {
            in_holdout[i] = true;
        }
    }

    let root = ctx.root(|i| !in_holdout[i]);
    let mut grown = grow(&ctx, root, params, 0);
    if holdout_len > 0 {
        let holdout: Vec<u32> = (0..data.len() as u32).filter(|&i| in_holdout[i as usize]).collect();
        prune(&ctx, &mut grown, &holdout);
    }
    Ok(WeakModel::Tree(Tree { root: grown }))
}

fn grow(ctx: &SplitContext<'_>, node: Node, params: &TreeParams, depth: usize) -> TreeNode {
    let class_weights = ctx.class_weights(&node.rows);
    let majority = argmax(&class_weights);
    let total: f64 = class_weights.iter().sum();
    let eps = 1e-10 * total.max(f64::MIN_POSITIVE);
    let pure = class_weights[majority] >= total - eps;
    if pure || params.max_depth.is_some_and(|d| depth >= d) || total < 2.0 * params.min_leaf_weight {
        return TreeNode::Leaf { class: majority };
    }
    // Impurities are concave, so the best split never loses; a zero-gain split
    // is still taken because it can enable gains below it (XOR).
    let Some(split) = ctx.best_split(&node, params.criterion, params.min_leaf_weight) else {
        return TreeNode::Leaf { class: majority };
    };
    let children = ctx
        .partition(&node, &split)
        .into_iter()
        .map(|child| {
            if child.rows.is_empty() {
                TreeNode::Leaf { class: majority }
            } else {
                grow(ctx, child, params, depth + 1)
            }
        })
        .collect();
    TreeNode::Internal { attribute: split.attribute, rule: split.rule, majority, children }
}

/// Collapses, bottom-up, every subtree whose majority leaf is no worse on the
/// holdout. Returns the holdout error of the (possibly pruned) node.
fn prune(ctx: &SplitContext<'_>, node: &mut TreeNode, holdout: &[u32]) -> f64 {
    let error_as = |class: usize| -> f64 {
        holdout
            .iter()
            .filter(|&&r| ctx.data.instances()[r as usize].label != class)
            .map(|&r| ctx.weights[r as usize])
            .sum()
    };
    match node {
        TreeNode::Leaf { class } => error_as(*class),
        TreeNode::Internal { attribute, rule, majority, children } => {
            let mut routed: Vec<Vec<u32>> = vec![Vec::new(); children.len()];
            for &r in holdout {
                routed[rule.branch(ctx.data.instances()[r as usize].values[*attribute])].push(r);
            }
            let subtree: f64 = children.iter_mut().zip(&routed).map(|(c, rows)| prune(ctx, c, rows)).sum();
            let leaf = error_as(*majority);
            let eps = 1e-12 * (leaf + subtree).max(f64::MIN_POSITIVE);
            if leaf <= subtree + eps {
                *node = TreeNode::Leaf { class: *majority };
                leaf
            } else {
                subtree
            }
        }
    }
}
