use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{check_binary, Prediction};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, from_seed, Rng};

pub const DEFAULT_TREES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeNode {
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { counts: Vec<u32> },
}

/// CART classification tree; node 0 is the root, `x <= threshold` goes
/// left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

fn argmax_lowest(counts: &[u32]) -> usize {
    let mut best = 0;
    for (i, c) in counts.iter().enumerate() {
        if *c > counts[best] {
            best = i;
        }
    }
    best
}

fn gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|c| (*c as f64 / n) * (*c as f64 / n)).sum::<f64>()
}

impl DecisionTree {
    pub fn leaf_counts(&self, x: &[f64]) -> &[u32] {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                TreeNode::Leaf { counts } => return counts,
                TreeNode::Split { feature, threshold, left, right } => {
                    i = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn predict_class(&self, x: &[f64]) -> usize {
        argmax_lowest(self.leaf_counts(x))
    }

    /// Grow to purity on `sample` (row indices, repeats allowed). At each
    /// node up to `max_features` features that are not constant on the node
    /// are tried, in a seeded random order; the best Gini split over all
    /// midpoints between consecutive distinct values wins (first found on
    /// ties). A node with no non-constant feature becomes a leaf.
    pub fn grow(x: &[Vec<f64>], y: &[usize], n_classes: usize, sample: Vec<usize>, max_features: usize, rng: &mut Rng) -> Self {
        let d = x[0].len();
        let mut features: Vec<usize> = (0..d).collect();
        let mut nodes: Vec<TreeNode> = Vec::new();
        // (node slot, rows)
        let mut stack: Vec<(usize, Vec<usize>)> = Vec::new();
        nodes.push(TreeNode::Leaf { counts: Vec::new() });
        stack.push((0, sample));
        let mut pairs: Vec<(f64, usize)> = Vec::new();
        while let Some((slot, idx)) = stack.pop() {
            let mut counts = alloc::vec![0usize; n_classes];
            for &i in &idx {
                counts[y[i]] += 1;
            }
            let leaf = TreeNode::Leaf { counts: counts.iter().map(|c| *c as u32).collect() };
            if counts.iter().filter(|c| **c > 0).count() < 2 {
                nodes[slot] = leaf;
                continue;
            }
            let parent = gini(&counts, idx.len());
            features.shuffle(rng);
            let mut best: Option<(f64, usize, f64)> = None;
            let mut tried = 0;
            for &f in &features {
                if tried == max_features {
                    break;
                }
                pairs.clear();
                pairs.extend(idx.iter().map(|&i| (x[i][f], y[i])));
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                if pairs[0].0 >= pairs[pairs.len() - 1].0 {
                    continue;
                }
                tried += 1;
                let n = pairs.len();
                let mut left = alloc::vec![0usize; n_classes];
                for k in 0..n - 1 {
                    left[pairs[k].1] += 1;
                    if pairs[k].0 == pairs[k + 1].0 {
                        continue;
                    }
                    let nl = k + 1;
                    let right: Vec<usize> = counts.iter().zip(&left).map(|(a, b)| a - b).collect();
                    let child = (nl as f64 * gini(&left, nl) + (n - nl) as f64 * gini(&right, n - nl)) / n as f64;
                    let gain = parent - child;
                    if best.is_none_or(|(g, _, _)| gain > g) {
                        let (a, b) = (pairs[k].0, pairs[k + 1].0);
                        let mut t = a + (b - a) / 2.0;
                        if t >= b {
                            t = a;
                        }
                        best = Some((gain, f, t));
                    }
                }
            }
            let Some((_, f, t)) = best else {
                nodes[slot] = leaf;
                continue;
            };
            let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| x[i][f] <= t);
            let left = nodes.len();
            nodes.push(TreeNode::Leaf { counts: Vec::new() });
            let right = nodes.len();
            nodes.push(TreeNode::Leaf { counts: Vec::new() });
            nodes[slot] = TreeNode::Split { feature: f, threshold: t, left, right };
            stack.push((right, r));
            stack.push((left, l));
        }
        DecisionTree { nodes }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForestModel {
    pub trees: Vec<DecisionTree>,
    pub n_trees: usize,
    /// Candidate features per node, `max(1, floor(√d))`.
    pub max_features: usize,
    pub seed: u64,
    pub n_features: usize,
    pub n_classes: usize,
}

pub fn max_features_for(d: usize) -> usize {
    (libm::sqrt(d as f64) as usize).max(1)
}

/// One bootstrapped tree of the forest, seeded with `tree_seed`.
pub fn rf_train_tree(x: &[Vec<f64>], y: &[usize], n_classes: usize, tree_seed: u64) -> DecisionTree {
    let mut rng = from_seed(tree_seed);
    let n = x.len();
    let sample: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    DecisionTree::grow(x, y, n_classes, sample, max_features_for(x[0].len()), &mut rng)
}

pub(crate) fn check_forest_input(x: &[Vec<f64>], y: &[usize], n_trees: usize) -> Result<usize> {
    check_binary(x.len(), y)?;
    if n_trees == 0 {
        return Err(Error::InvalidParameter("n_trees must be at least 1".into()));
    }
    let d = x[0].len();
    if let Some(r) = x.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, actual: r.len() });
    }
    Ok(2)
}

/// Assemble a forest from trees trained with [`rf_train_tree`] under
/// `derive_seed(seed, t)`.
pub fn rf_from_trees(trees: Vec<DecisionTree>, n_features: usize, seed: u64) -> RandomForestModel {
    RandomForestModel {
        n_trees: trees.len(),
        trees,
        max_features: max_features_for(n_features),
        seed,
        n_features,
        n_classes: 2,
    }
}

pub fn rf_train(x: &[Vec<f64>], y: &[usize], n_trees: usize, seed: u64) -> Result<RandomForestModel> {
    let n_classes = check_forest_input(x, y, n_trees)?;
    let trees = (0..n_trees)
        .map(|t| rf_train_tree(x, y, n_classes, derive_seed(seed, t as u64)))
        .collect();
    Ok(rf_from_trees(trees, x[0].len(), seed))
}

impl RandomForestModel {
    /// Hard majority vote; ties go to the lowest class id. The score is
    /// the winner's vote fraction.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch { expected: self.n_features, actual: x.len() });
        }
        let mut votes = alloc::vec![0u32; self.n_classes];
        for t in &self.trees {
            votes[t.predict_class(x)] += 1;
        }
        let best = argmax_lowest(&votes);
        Ok(Prediction { class: best, score: f64::from(votes[best]) / self.trees.len() as f64 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    pub(crate) fn xor(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut r = from_seed(seed);
        let x: Vec<Vec<f64>> = (0..n).map(|_| vec![r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)]).collect();
        let y = x.iter().map(|p| usize::from((p[0] > 0.0) != (p[1] > 0.0))).collect();
        (x, y)
    }

    #[test]
    fn xor_held_out() {
        let (x, y) = xor(400, 42);
        let (tx, ty) = xor(400, 43);
        let m = rf_train(&x, &y, DEFAULT_TREES, 7).unwrap();
        let acc = tx.iter().zip(&ty).filter(|(p, c)| m.predict(p).unwrap().class == **c).count() as f64 / 400.0;
        assert!(acc > 0.9, "{acc}");
    }

    #[test]
    fn same_seed_same_forest() {
        let (x, y) = xor(100, 1);
        assert_eq!(rf_train(&x, &y, 10, 3).unwrap(), rf_train(&x, &y, 10, 3).unwrap());
        assert_ne!(rf_train(&x, &y, 10, 3).unwrap(), rf_train(&x, &y, 10, 4).unwrap());
    }

    #[test]
    fn constant_features_predict_majority() {
        let x = vec![vec![1.0, 2.0]; 9];
        let y = vec![0, 1, 1, 1, 0, 1, 1, 0, 1];
        let m = rf_train(&x, &y, 15, 0).unwrap();
        assert!(m.trees.iter().all(|t| t.nodes.len() == 1));
        assert_eq!(m.predict(&[5.0, -3.0]).unwrap().class, 1);
    }

    #[test]
    fn tree_order_does_not_matter() {
        let (x, y) = xor(120, 9);
        let m = rf_train(&x, &y, 11, 2).unwrap();
        let mut rev = m.clone();
        rev.trees.reverse();
        for p in &x {
            assert_eq!(m.predict(p).unwrap(), rev.predict(p).unwrap());
        }
    }

    #[test]
    fn training_fits_with_leaves_pure() {
        let (x, y) = xor(50, 5);
        let mut rng = from_seed(0);
        let t = DecisionTree::grow(&x, &y, 2, (0..50).collect(), 2, &mut rng);
        assert!(x.iter().zip(&y).all(|(p, c)| t.predict_class(p) == *c));
        for n in &t.nodes {
            if let TreeNode::Leaf { counts } = n {
                assert!(counts.iter().any(|c| *c > 0));
            }
        }
    }
}
