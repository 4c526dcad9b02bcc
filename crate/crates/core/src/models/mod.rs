//! Classifiers written from scratch (linear SVM, k-nearest neighbours,
//! random forest), the TF-IDF content baseline, and the trained pipeline
//! that bundles scaling, model and schema.
//!
//! Labels are class ids: 0 = reliable, 1 = unreliable.

mod forest;
mod knn;
mod pipeline;
mod svm;
mod tfidf;

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

pub use forest::{
    max_features_for, rf_from_trees, rf_train, rf_train_tree, DecisionTree, RandomForestModel, TreeNode,
    DEFAULT_TREES,
};
pub use knn::{knn_train, KnnModel, DEFAULT_K};
pub use pipeline::{train_pipeline, BaselineModel, Model, PipelineMetadata, Sample, TrainedPipeline};
pub use svm::{svm_train, svm_train_sparse, LinearSvmModel, SvmTrace, DEFAULT_COST};
pub use tfidf::{ngrams, TfidfVectorizer, DEFAULT_MIN_DF};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub class: usize,
    /// Signed margin for the SVMs, winning vote fraction for KNN/RF.
    pub score: f64,
}

/// Sparse row: sorted, unique indices.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseVec {
    pub idx: Vec<u32>,
    pub val: Vec<f64>,
}

impl SparseVec {
    pub fn from_dense(x: &[f64]) -> Self {
        let mut v = SparseVec::default();
        for (i, x) in x.iter().enumerate() {
            if *x != 0.0 {
                v.idx.push(i as u32);
                v.val.push(*x);
            }
        }
        v
    }

    pub fn dot(&self, w: &[f64]) -> f64 {
        self.idx.iter().zip(&self.val).map(|(i, v)| w[*i as usize] * v).sum()
    }

    pub fn axpy(&self, a: f64, w: &mut [f64]) {
        for (i, v) in self.idx.iter().zip(&self.val) {
            w[*i as usize] += a * v;
        }
    }

    pub fn sq_norm(&self) -> f64 {
        self.val.iter().map(|v| v * v).sum()
    }

    /// Append `dense` starting at column `offset`.
    pub fn extend_dense(&mut self, offset: usize, dense: &[f64]) {
        for (j, x) in dense.iter().enumerate() {
            if *x != 0.0 {
                self.idx.push((offset + j) as u32);
                self.val.push(*x);
            }
        }
    }
}

/// Labels must be 0/1 with both classes present.
pub(crate) fn check_binary(n: usize, y: &[usize]) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyInput("training set"));
    }
    if n != y.len() {
        return Err(Error::LengthMismatch { expected: n, actual: y.len() });
    }
    if let Some(bad) = y.iter().find(|c| **c > 1) {
        return Err(Error::NonBinaryLabels(*bad));
    }
    if !y.contains(&0) || !y.contains(&1) {
        return Err(Error::SingleClass);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassifierKind {
    #[serde(rename = "svm")]
    Svm,
    #[serde(rename = "knn")]
    Knn,
    #[serde(rename = "rf")]
    Rf,
    #[serde(rename = "baseline-svm")]
    BaselineSvm,
}

impl ClassifierKind {
    pub const TAG: [ClassifierKind; 3] = [ClassifierKind::Svm, ClassifierKind::Knn, ClassifierKind::Rf];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::Svm => "svm",
            ClassifierKind::Knn => "knn",
            ClassifierKind::Rf => "rf",
            ClassifierKind::BaselineSvm => "baseline-svm",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [ClassifierKind::Svm, ClassifierKind::Knn, ClassifierKind::Rf, ClassifierKind::BaselineSvm]
            .into_iter()
            .find(|k| k.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown classifier {s:?} (svm, knn, rf, baseline-svm)")))
    }
}

/// Classifier choice and hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifierConfig {
    pub kind: ClassifierKind,
    /// SVM cost (also used by the baseline).
    pub c: f64,
    pub k: usize,
    pub trees: usize,
    /// Minimum document frequency of baseline n-grams.
    pub min_df: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig { kind: ClassifierKind::Svm, c: DEFAULT_COST, k: DEFAULT_K, trees: DEFAULT_TREES, min_df: DEFAULT_MIN_DF }
    }
}

impl ClassifierConfig {
    pub fn with_kind(kind: ClassifierKind) -> Self {
        ClassifierConfig { kind, ..Self::default() }
    }
}
