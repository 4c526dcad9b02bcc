//! Importance-based feature selection.
//!
//! Four scorers (binned Shannon entropy, extremely-randomized-tree
//! importance, L1-logistic coefficient size, binned mutual information)
//! are min-max normalized and combined by a geometric mean:
//!
//! ```text
//! r(f) = (SE(f)⁻¹ · TB(f) · L1(f) · MI(f))^(1/4)
//! ```
//!
//! Features with `r = 0` are dropped. Note that the inverted entropy term
//! rewards *low*-entropy (near-constant) features; it is implemented as
//! written.

mod binning;
mod extra_trees;
mod l1;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use binning::{mutual_info_score, quantile_bins, shannon_entropy_score};
pub use extra_trees::{combine_tree_importances, extra_tree_importance, tree_importance};
pub use l1::{l1_logistic, l1_score, DEFAULT_LAMBDA};

use crate::error::{Error, Result};
use crate::features::{FeatureSchema, PruningMode, Standardizer};

/// Guard added to the raw entropy before inverting it.
pub const SE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureImportance {
    pub se_raw: f64,
    pub tb_raw: f64,
    pub l1_raw: f64,
    pub mi_raw: f64,
    pub se_inv_norm: f64,
    pub tb_norm: f64,
    pub l1_norm: f64,
    pub mi_norm: f64,
    pub r: f64,
}

/// Per-feature scores, aligned with the input features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceScores {
    pub features: Vec<FeatureImportance>,
}

/// Min-max scale to [0, 1]; an all-equal column maps to all ones.
pub fn min_max(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return alloc::vec![1.0; values.len()];
    }
    values.iter().map(|v| ((v - lo) / (hi - lo)).clamp(0.0, 1.0)).collect()
}

/// Geometric mean of four factors in [0, 1]. Taken as the product of
/// fourth roots so small nonzero factors never underflow to 0.
pub fn geometric_mean4(f: [f64; 4]) -> f64 {
    f.iter().map(|v| libm::sqrt(libm::sqrt(*v))).product()
}

pub fn aggregate_importance(se: &[f64], tb: &[f64], l1: &[f64], mi: &[f64]) -> Result<ImportanceScores> {
    let d = se.len();
    for other in [tb, l1, mi] {
        if other.len() != d {
            return Err(Error::LengthMismatch { expected: d, actual: other.len() });
        }
    }
    let se_inv: Vec<f64> = se.iter().map(|s| 1.0 / (s + SE_EPSILON)).collect();
    let (a, b, c, e) = (min_max(&se_inv), min_max(tb), min_max(l1), min_max(mi));
    let features = (0..d)
        .map(|i| FeatureImportance {
            se_raw: se[i],
            tb_raw: tb[i],
            l1_raw: l1[i],
            mi_raw: mi[i],
            se_inv_norm: a[i],
            tb_norm: b[i],
            l1_norm: c[i],
            mi_norm: e[i],
            r: geometric_mean4([a[i], b[i], c[i], e[i]]),
        })
        .collect();
    Ok(ImportanceScores { features })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    pub bins: usize,
    pub trees: usize,
    pub lambda: f64,
    pub seed: u64,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig { bins: 10, trees: 250, lambda: DEFAULT_LAMBDA, seed: 0 }
    }
}

/// Raw scores from the four scorers. Tree importances may be supplied
/// (e.g. computed in parallel); otherwise they are computed here.
pub fn raw_scores(
    x: &[Vec<f64>],
    y: &[usize],
    config: &SelectionConfig,
    tree: Option<Vec<f64>>,
) -> Result<[Vec<f64>; 4]> {
    let d = x.first().ok_or(Error::EmptyInput("feature matrix"))?.len();
    let mut se = Vec::with_capacity(d);
    let mut mi = Vec::with_capacity(d);
    for j in 0..d {
        let col: Vec<f64> = x.iter().map(|r| r[j]).collect();
        se.push(shannon_entropy_score(&col, config.bins)?);
        mi.push(mutual_info_score(&col, y, config.bins)?);
    }
    let tb = match tree {
        Some(t) => t,
        None => tree_importance(x, y, config.trees, config.seed)?,
    };
    let z = Standardizer::fit(x)?.apply_all(x)?;
    let l1 = l1_score(&z, y, config.lambda)?;
    Ok([se, tb, l1, mi])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub names: Vec<String>,
    pub scores: ImportanceScores,
    pub retained: Vec<bool>,
}

/// Drop every feature with `r = 0`, keeping schema order.
pub fn select_from_scores(schema: &FeatureSchema, scores: ImportanceScores) -> Result<(FeatureSchema, SelectionReport)> {
    if scores.features.len() != schema.len() {
        return Err(Error::LengthMismatch { expected: schema.len(), actual: scores.features.len() });
    }
    let retained: Vec<bool> = scores.features.iter().map(|f| f.r > 0.0).collect();
    if !retained.iter().any(|k| *k) {
        return Err(Error::AllFeaturesDropped);
    }
    let mut out = schema.retain(|i, _| retained[i]);
    out.pruning = PruningMode::Computed(String::new());
    let report = SelectionReport { names: schema.names.clone(), scores, retained };
    Ok((out, report))
}

pub fn select_features(
    x: &[Vec<f64>],
    y: &[usize],
    schema: &FeatureSchema,
    config: &SelectionConfig,
) -> Result<(FeatureSchema, SelectionReport)> {
    if x.first().is_some_and(|r| r.len() != schema.len()) {
        return Err(Error::DimensionMismatch { expected: schema.len(), actual: x[0].len() });
    }
    let [se, tb, l1, mi] = raw_scores(x, y, config, None)?;
    select_from_scores(schema, aggregate_importance(&se, &tb, &l1, &mi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{Granularity, Group};
    use crate::rng::from_seed;
    use alloc::format;
    use alloc::vec;
    use rand::Rng as _;

    #[test]
    fn fourth_root_cases() {
        assert_eq!(geometric_mean4([1.0; 4]), 1.0);
        assert_eq!(geometric_mean4([0.0625, 1.0, 1.0, 1.0]), 0.5);
        assert_eq!(geometric_mean4([1.0, 1.0, 0.0, 1.0]), 0.0);
    }

    #[test]
    fn min_max_degenerate_column_is_neutral() {
        assert_eq!(min_max(&[3.0, 3.0]), vec![1.0, 1.0]);
        assert_eq!(min_max(&[1.0, 3.0, 2.0]), vec![0.0, 1.0, 0.5]);
    }

    #[test]
    fn aggregate_checks_lengths() {
        assert!(aggregate_importance(&[1.0], &[1.0, 2.0], &[1.0], &[1.0]).is_err());
    }

    fn synthetic(n: usize, noise: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut r = from_seed(seed);
        let y: Vec<usize> = (0..n).map(|i| i % 2).collect();
        let x = y
            .iter()
            .map(|c| {
                let mut row = vec![*c as f64, 4.0];
                row.extend((0..noise).map(|_| r.gen::<f64>()));
                row
            })
            .collect();
        (x, y)
    }

    fn schema(d: usize) -> FeatureSchema {
        FeatureSchema {
            names: (0..d).map(|i| format!("R.f{i}")).collect(),
            granularity: Granularity::C,
            groups: vec![Group::R],
            pruning: PruningMode::None,
        }
    }

    #[test]
    fn label_copy_kept_constant_dropped() {
        let (x, y) = synthetic(200, 6, 11);
        let cfg = SelectionConfig { trees: 40, ..SelectionConfig::default() };
        let (kept, report) = select_features(&x, &y, &schema(8), &cfg).unwrap();
        assert!(report.retained[0]);
        assert!(!report.retained[1]);
        assert_eq!(report.scores.features[1].mi_raw, 0.0);
        let best = report.scores.features.iter().map(|f| f.r).fold(0.0, f64::max);
        assert_eq!(report.scores.features[0].r, best);
        // survivors keep schema order
        let idx: Vec<usize> = kept.names.iter().map(|n| schema(8).index_of(n).unwrap()).collect();
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn default_lambda_zeroes_most_noise() {
        let (x, y) = synthetic(500, 18, 2);
        let z = Standardizer::fit(&x).unwrap().apply_all(&x).unwrap();
        let s = l1_score(&z, &y, DEFAULT_LAMBDA).unwrap();
        let zeroed = s[2..].iter().filter(|v| **v == 0.0).count();
        assert!(zeroed >= 9, "{zeroed} of 18 noise features zeroed");
        assert!(s[0] > 0.0);
    }

    #[test]
    fn all_dropped_is_an_error() {
        let scores = aggregate_importance(&[1.0, 2.0], &[0.0, 0.0], &[0.0, 0.0], &[0.0, 0.0]).unwrap();
        // all-equal columns normalize to 1, so force a zero factor instead
        let mut s = scores.clone();
        for f in &mut s.features {
            f.r = 0.0;
        }
        assert_eq!(select_from_scores(&schema(2), s), Err(Error::AllFeaturesDropped));
        assert!(select_from_scores(&schema(2), scores).is_ok());
    }
}
