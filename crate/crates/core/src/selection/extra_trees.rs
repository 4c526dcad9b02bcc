use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, from_seed, Rng};

fn gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|c| (*c as f64 / n) * (*c as f64 / n)).sum::<f64>()
}

fn class_counts(idx: &[usize], y: &[usize], n_classes: usize) -> Vec<usize> {
    let mut c = alloc::vec![0; n_classes];
    for &i in idx {
        c[y[i]] += 1;
    }
    c
}

pub(crate) fn check_labels(x: &[Vec<f64>], y: &[usize]) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::EmptyInput("training matrix"));
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { expected: x.len(), actual: y.len() });
    }
    let d = x[0].len();
    if let Some(r) = x.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, actual: r.len() });
    }
    let n_classes = y.iter().max().map_or(0, |m| m + 1);
    let present = (0..n_classes).filter(|c| y.contains(c)).count();
    if present < 2 {
        return Err(Error::SingleClass);
    }
    Ok(n_classes)
}

/// Impurity-decrease importances of one extremely randomized tree grown
/// to purity on all rows, normalized to sum 1 (all zero if it never
/// split).
pub fn extra_tree_importance(x: &[Vec<f64>], y: &[usize], seed: u64) -> Result<Vec<f64>> {
    let n_classes = check_labels(x, y)?;
    let d = x[0].len();
    let k = (libm::sqrt(d as f64) as usize).max(1);
    let total = x.len() as f64;
    let mut rng: Rng = from_seed(seed);
    let mut imp = alloc::vec![0.0; d];
    let mut features: Vec<usize> = (0..d).collect();

    let mut stack: Vec<Vec<usize>> = alloc::vec![(0..x.len()).collect()];
    while let Some(idx) = stack.pop() {
        let counts = class_counts(&idx, y, n_classes);
        if counts.iter().filter(|c| **c > 0).count() < 2 {
            continue;
        }
        let parent = gini(&counts, idx.len());
        features.shuffle(&mut rng);
        let mut best: Option<(f64, usize, f64)> = None;
        let mut tried = 0;
        for &f in &features {
            if tried == k {
                break;
            }
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &i in &idx {
                lo = lo.min(x[i][f]);
                hi = hi.max(x[i][f]);
            }
            if lo >= hi {
                continue;
            }
            tried += 1;
            let mut t = lo + rng.gen::<f64>() * (hi - lo);
            if t >= hi {
                t = lo;
            }
            let mut left = alloc::vec![0; n_classes];
            let mut nl = 0;
            for &i in &idx {
                if x[i][f] <= t {
                    left[y[i]] += 1;
                    nl += 1;
                }
            }
            let right: Vec<usize> = counts.iter().zip(&left).map(|(a, b)| a - b).collect();
            let nr = idx.len() - nl;
            let n = idx.len() as f64;
            let child = (nl as f64 * gini(&left, nl) + nr as f64 * gini(&right, nr)) / n;
            let gain = parent - child;
            if best.is_none_or(|(g, _, _)| gain > g) {
                best = Some((gain, f, t));
            }
        }
        let Some((gain, f, t)) = best else { continue };
        imp[f] += gain * idx.len() as f64 / total;
        let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| x[i][f] <= t);
        stack.push(r);
        stack.push(l);
    }
    let sum: f64 = imp.iter().sum();
    if sum > 0.0 {
        imp.iter_mut().for_each(|v| *v /= sum);
    }
    Ok(imp)
}

/// Average per-tree importances and renormalize to sum 1.
pub fn combine_tree_importances(per_tree: &[Vec<f64>]) -> Vec<f64> {
    let Some(first) = per_tree.first() else { return Vec::new() };
    let mut avg = alloc::vec![0.0; first.len()];
    for t in per_tree {
        for (a, v) in avg.iter_mut().zip(t) {
            *a += v;
        }
    }
    let sum: f64 = avg.iter().sum();
    if sum > 0.0 {
        avg.iter_mut().for_each(|v| *v /= sum);
    }
    avg
}

/// Ensemble importance; tree `t` uses seed `derive_seed(seed, t)`.
pub fn tree_importance(x: &[Vec<f64>], y: &[usize], n_trees: usize, seed: u64) -> Result<Vec<f64>> {
    if n_trees == 0 {
        return Err(Error::InvalidParameter("n_trees must be at least 1".into()));
    }
    let per_tree = (0..n_trees)
        .map(|t| extra_tree_importance(x, y, derive_seed(seed, t as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(combine_tree_importances(&per_tree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn label_and_constant() -> (Vec<Vec<f64>>, Vec<usize>) {
        let y: Vec<usize> = (0..60).map(|i| i % 2).collect();
        let x = y.iter().map(|c| vec![*c as f64, 7.0]).collect();
        (x, y)
    }

    #[test]
    fn label_copy_dominates_constant_never_splits() {
        let (x, y) = label_and_constant();
        let imp = tree_importance(&x, &y, 25, 3).unwrap();
        assert!(imp[0] > 0.9);
        assert_eq!(imp[1], 0.0);
        assert!((imp.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn seeded_and_normalized() {
        let mut r = from_seed(1);
        let x: Vec<Vec<f64>> = (0..80).map(|_| (0..5).map(|_| r.gen::<f64>()).collect()).collect();
        let y: Vec<usize> = x.iter().map(|row| usize::from(row[2] + 0.3 * row[0] > 0.6)).collect();
        let a = tree_importance(&x, &y, 30, 9).unwrap();
        assert_eq!(a, tree_importance(&x, &y, 30, 9).unwrap());
        assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(a.iter().all(|v| *v >= 0.0));
        let top = (0..5).max_by(|i, j| a[*i].total_cmp(&a[*j])).unwrap();
        assert_eq!(top, 2);
    }

    #[test]
    fn rejects_single_class() {
        let x = vec![vec![1.0], vec![2.0]];
        assert_eq!(tree_importance(&x, &[1, 1], 5, 0), Err(Error::SingleClass));
        assert!(tree_importance(&x, &[0, 1], 0, 0).is_err());
    }
}
