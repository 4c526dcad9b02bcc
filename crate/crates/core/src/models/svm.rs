use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{check_binary, Prediction, SparseVec};
use crate::error::{Error, Result};

pub const DEFAULT_COST: f64 = 0.1;
const GAP_TOLERANCE: f64 = 1e-4;
const MAX_PASSES: usize = 10_000;
const MONOTONE_SLACK: f64 = 1e-9;

/// Linear soft-margin SVM (hinge loss). Class 1 is the positive side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub cost: f64,
}

/// Convergence record of one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmTrace {
    /// Dual objective `½‖w‖² − Σα` after each pass (minimized, so
    /// nonincreasing).
    pub dual_objective: Vec<f64>,
    /// Primal objective after each pass.
    pub primal_objective: Vec<f64>,
    pub converged: bool,
}

impl LinearSvmModel {
    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.weights.len() {
            return Err(Error::DimensionMismatch { expected: self.weights.len(), actual: x.len() });
        }
        Ok(crate::math::dot(&self.weights, x) + self.bias)
    }

    pub fn decision_sparse(&self, x: &SparseVec) -> f64 {
        x.dot(&self.weights) + self.bias
    }

    /// Class 1 iff the margin is positive; a zero margin goes to class 0.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        let m = self.decision(x)?;
        Ok(Prediction { class: usize::from(m > 0.0), score: m })
    }
}

pub fn svm_train(x: &[Vec<f64>], y: &[usize], cost: f64) -> Result<LinearSvmModel> {
    let rows: Vec<SparseVec> = x.iter().map(|r| SparseVec::from_dense(r)).collect();
    let dim = x.first().map_or(0, Vec::len);
    if let Some(r) = x.iter().find(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, actual: r.len() });
    }
    Ok(svm_train_sparse(&rows, dim, y, cost)?.0)
}

/// Dual coordinate descent on
/// `min ½‖w‖² + C·Σ max(0, 1 − sᵢ(w·xᵢ + b))`, with the bias handled as an
/// extra constant-1 feature. Coordinates are visited in index order every
/// pass (no shrinking, no shuffling). Stops once the duality gap is at most
/// 1e-4·max(1, primal), or after 10⁴ passes.
pub fn svm_train_sparse(rows: &[SparseVec], dim: usize, y: &[usize], cost: f64) -> Result<(LinearSvmModel, SvmTrace)> {
    check_binary(rows.len(), y)?;
    if !(cost > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("SVM cost must be positive, got {cost}")));
    }
    if let Some(bad) = rows.iter().flat_map(|r| r.idx.iter()).find(|i| **i as usize >= dim) {
        return Err(Error::DimensionMismatch { expected: dim, actual: *bad as usize + 1 });
    }
    let n = rows.len();
    let s: Vec<f64> = y.iter().map(|c| if *c == 1 { 1.0 } else { -1.0 }).collect();
    let q: Vec<f64> = rows.iter().map(|r| r.sq_norm() + 1.0).collect();
    let mut alpha = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; dim];
    let mut b = 0.0;
    let mut trace = SvmTrace { dual_objective: Vec::new(), primal_objective: Vec::new(), converged: false };

    for _ in 0..MAX_PASSES {
        for i in 0..n {
            let g = s[i] * (rows[i].dot(&w) + b) - 1.0;
            let new = (alpha[i] - g / q[i]).clamp(0.0, cost);
            let delta = new - alpha[i];
            if delta != 0.0 {
                alpha[i] = new;
                rows[i].axpy(delta * s[i], &mut w);
                b += delta * s[i];
            }
        }
        let half_norm = 0.5 * (crate::math::dot(&w, &w) + b * b);
        let dual = half_norm - alpha.iter().sum::<f64>();
        let hinge: f64 = (0..n).map(|i| (1.0 - s[i] * (rows[i].dot(&w) + b)).max(0.0)).sum();
        let primal = half_norm + cost * hinge;
        if let Some(prev) = trace.dual_objective.last() {
            debug_assert!(dual <= prev + MONOTONE_SLACK * prev.abs().max(1.0), "dual objective increased");
        }
        trace.dual_objective.push(dual);
        trace.primal_objective.push(primal);
        if primal + dual <= GAP_TOLERANCE * primal.abs().max(1.0) {
            trace.converged = true;
            break;
        }
    }
    Ok((LinearSvmModel { weights: w, bias: b, cost }, trace))
}
