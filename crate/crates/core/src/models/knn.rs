use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{check_binary, Prediction};
use crate::error::{Error, Result};
use crate::math::squared_distance;

pub const DEFAULT_K: usize = 5;

/// Euclidean k-nearest-neighbour vote over stored points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

pub fn knn_train(x: &[Vec<f64>], y: &[usize], k: usize) -> Result<KnnModel> {
    check_binary(x.len(), y)?;
    if k == 0 || k > x.len() {
        return Err(Error::InvalidParameter(alloc::format!("k = {k} must be in 1..={}", x.len())));
    }
    let d = x[0].len();
    if let Some(r) = x.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, actual: r.len() });
    }
    Ok(KnnModel { k, points: x.to_vec(), labels: y.to_vec() })
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

impl KnnModel {
    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// Majority class of the `k` nearest points; neighbours are ordered by
    /// (distance, label, coordinates) so the set is independent of storage
    /// order. Vote ties go to the class with the smallest summed distance,
    /// then the lowest class id. The score is the winner's vote fraction.
    pub fn predict(&self, q: &[f64]) -> Result<Prediction> {
        if q.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: q.len() });
        }
        let mut order: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (libm::sqrt(squared_distance(p, q)), i))
            .collect();
        order.sort_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(self.labels[a.1].cmp(&self.labels[b.1]))
                .then_with(|| lexicographic(&self.points[a.1], &self.points[b.1]))
        });
        let n_classes = self.labels.iter().max().map_or(1, |m| m + 1);
        let mut votes = alloc::vec![0usize; n_classes];
        let mut dist = alloc::vec![0.0; n_classes];
        for &(d, i) in order.iter().take(self.k) {
            votes[self.labels[i]] += 1;
            dist[self.labels[i]] += d;
        }
        let mut best = 0;
        for c in 1..n_classes {
            if votes[c] > votes[best] || (votes[c] == votes[best] && dist[c] < dist[best]) {
                best = c;
            }
        }
        Ok(Prediction { class: best, score: votes[best] as f64 / self.k as f64 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn nearest_by_inspection() {
        // fake = unreliable = 1, real = reliable = 0
        let m = knn_train(&[vec![0.0, 0.0], vec![1.0, 1.0]], &[1, 0], 1).unwrap();
        assert_eq!(m.predict(&[0.1, 0.1]).unwrap().class, 1);
    }

    #[test]
    fn self_prediction_with_k1() {
        let x: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64, (i * i % 7) as f64]).collect();
        let y: Vec<usize> = (0..30).map(|i| (i * 3 % 5) % 2).collect();
        let m = knn_train(&x, &y, 1).unwrap();
        assert!(x.iter().zip(&y).all(|(p, c)| m.predict(p).unwrap().class == *c));
    }

    #[test]
    fn vote_tie_goes_to_closer_class() {
        let m = knn_train(&[vec![0.0], vec![3.0], vec![-1.0], vec![4.0]], &[0, 1, 0, 1], 2).unwrap();
        // neighbours of 1.8: 3.0 (class 1, 1.2) and 0.0 (class 0, 1.8)
        assert_eq!(m.predict(&[1.8]).unwrap().class, 1);
        // equidistant: lowest class id
        let m = knn_train(&[vec![-1.0], vec![1.0]], &[1, 0], 2).unwrap();
        assert_eq!(m.predict(&[0.0]).unwrap().class, 0);
    }

    #[test]
    fn errors() {
        assert!(knn_train(&[vec![0.0], vec![1.0]], &[0, 1], 3).is_err());
        assert!(knn_train(&[vec![0.0], vec![1.0]], &[0, 0], 1).is_err());
        let m = knn_train(&[vec![0.0], vec![1.0]], &[0, 1], 1).unwrap();
        assert!(m.predict(&[0.0, 1.0]).is_err());
    }
}
