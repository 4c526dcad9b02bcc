use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::pairwise_sum;

/// Per-feature z-scoring with population standard deviation.
///
/// A column whose spread is negligible relative to its mean is treated as
/// constant: its stddev is stored as 0 and it maps to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub stddev: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyInput("standardizer fit"))?;
        let d = first.len();
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::LengthMismatch { expected: d, actual: r.len() });
        }
        let n = rows.len() as f64;
        let mut mean = Vec::with_capacity(d);
        let mut stddev = Vec::with_capacity(d);
        let mut col = Vec::with_capacity(rows.len());
        for j in 0..d {
            col.clear();
            col.extend(rows.iter().map(|r| r[j]));
            let m = pairwise_sum(&col) / n;
            for v in col.iter_mut() {
                *v = (*v - m) * (*v - m);
            }
            let mut s = libm::sqrt(pairwise_sum(&col) / n);
            if s <= 1e-12 * libm::fabs(m).max(1.0) {
                s = 0.0;
            }
            mean.push(m);
            stddev.push(s);
        }
        Ok(Standardizer { mean, stddev })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Columns flagged as zero-variance.
    pub fn zero_variance(&self) -> Vec<bool> {
        self.stddev.iter().map(|s| *s == 0.0).collect()
    }

    pub fn apply(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: row.len() });
        }
        Ok(row
            .iter()
            .zip(self.mean.iter().zip(&self.stddev))
            .map(|(x, (m, s))| if *s == 0.0 { 0.0 } else { (x - m) / s })
            .collect())
    }

    pub fn apply_all(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        rows.iter().map(|r| self.apply(r)).collect()
    }

    /// Undo [`apply`](Self::apply); zero-variance columns come back as the
    /// column mean.
    pub fn inverse(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: row.len() });
        }
        Ok(row
            .iter()
            .zip(self.mean.iter().zip(&self.stddev))
            .map(|(z, (m, s))| z * s + m)
            .collect())
    }
}
