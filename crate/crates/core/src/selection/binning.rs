use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::entropy_bits;

/// Equal-frequency bin index per value.
///
/// Inner edges are the `i/bins` quantiles (linear interpolation between
/// order statistics), deduplicated; a value's bin is the number of edges
/// strictly below it. An edge at the column maximum can never separate
/// anything under that rule, so it is lowered to the largest value below
/// the maximum (or dropped for a constant column).
pub fn quantile_bins(column: &[f64], bins: usize) -> Result<Vec<usize>> {
    if column.is_empty() {
        return Err(Error::EmptyInput("feature column"));
    }
    if bins < 2 {
        return Err(Error::InvalidParameter(alloc::format!("bins must be at least 2, got {bins}")));
    }
    let mut sorted = column.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let max = sorted[n - 1];
    let below_max = sorted.iter().rev().find(|v| **v < max).copied();

    let mut edges: Vec<f64> = Vec::with_capacity(bins - 1);
    for i in 1..bins {
        let pos = (n - 1) as f64 * i as f64 / bins as f64;
        let lo = libm::floor(pos) as usize;
        let hi = (lo + 1).min(n - 1);
        let frac = pos - lo as f64;
        let mut e = sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
        if e >= max {
            match below_max {
                Some(b) => e = b,
                None => continue,
            }
        }
        if edges.last().is_none_or(|last| *last != e) {
            edges.push(e);
        }
    }
    Ok(column.iter().map(|x| edges.iter().take_while(|e| *x > **e).count()).collect())
}

fn histogram(bins: &[usize]) -> Vec<usize> {
    let k = bins.iter().max().map_or(0, |m| m + 1);
    let mut counts = alloc::vec![0usize; k];
    for b in bins {
        counts[*b] += 1;
    }
    counts
}

/// Entropy in bits of the quantile-binned column.
pub fn shannon_entropy_score(column: &[f64], bins: usize) -> Result<f64> {
    let b = quantile_bins(column, bins)?;
    let n = b.len() as f64;
    Ok(entropy_bits(histogram(&b).into_iter().map(|c| c as f64 / n)))
}

/// Plug-in mutual information in bits between the binned column and the
/// class ids.
pub fn mutual_info_score(column: &[f64], y: &[usize], bins: usize) -> Result<f64> {
    if column.len() != y.len() {
        return Err(Error::LengthMismatch { expected: column.len(), actual: y.len() });
    }
    let b = quantile_bins(column, bins)?;
    let nb = b.iter().max().map_or(0, |m| m + 1);
    let nc = y.iter().max().map_or(0, |m| m + 1);
    let mut joint = alloc::vec![0usize; nb * nc];
    for (bi, ci) in b.iter().zip(y) {
        joint[bi * nc + ci] += 1;
    }
    let n = y.len() as f64;
    let pb = histogram(&b);
    let pc = histogram(y);
    let mut mi = 0.0;
    for i in 0..nb {
        for j in 0..nc {
            let c = joint[i * nc + j];
            if c > 0 {
                let pij = c as f64 / n;
                mi += pij * libm::log2(pij * n * n / (pb[i] as f64 * pc[j] as f64));
            }
        }
    }
    Ok(mi.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn entropy_examples() {
        assert_eq!(shannon_entropy_score(&[3.0; 7], 10).unwrap(), 0.0);
        assert_eq!(shannon_entropy_score(&[1.0, 2.0, 3.0, 4.0], 2).unwrap(), 1.0);
        let col: Vec<f64> = (1..=8).map(f64::from).collect();
        assert_eq!(quantile_bins(&col, 4).unwrap(), vec![0, 0, 1, 1, 2, 2, 3, 3]);
        assert_eq!(shannon_entropy_score(&col, 4).unwrap(), 2.0);
    }

    #[test]
    fn errors() {
        assert!(shannon_entropy_score(&[], 4).is_err());
        assert!(shannon_entropy_score(&[1.0], 1).is_err());
        assert!(mutual_info_score(&[1.0], &[0, 1], 2).is_err());
    }

    #[test]
    fn skewed_binary_column_still_splits() {
        // 60% ones: the median edge equals the maximum and is lowered
        let col = [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        assert_eq!(quantile_bins(&col, 2).unwrap(), vec![0, 0, 0, 0, 1, 1, 1, 1, 1, 1]);
        let col = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0];
        assert_eq!(quantile_bins(&col, 2).unwrap(), vec![0, 0, 0, 0, 0, 0, 1, 1, 1, 1]);
    }

    #[test]
    fn mutual_information_examples() {
        let y = [0, 1, 0, 1, 0, 1, 0, 1];
        let x: Vec<f64> = y.iter().map(|v| *v as f64).collect();
        assert!((mutual_info_score(&x, &y, 2).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(mutual_info_score(&[2.0; 8], &y, 2).unwrap(), 0.0);

        // balanced labels, a quarter of each class flipped
        let y: Vec<usize> = (0..8).map(|i| usize::from(i >= 4)).collect();
        let x = [1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0];
        let h = |p: f64| -p * libm::log2(p) - (1.0 - p) * libm::log2(1.0 - p);
        let expected = 1.0 - h(0.25);
        assert!((mutual_info_score(&x, &y, 2).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.1887).abs() < 1e-4);
    }
}
