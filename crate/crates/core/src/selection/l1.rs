use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sigmoid;

/// Default penalty strength.
pub const DEFAULT_LAMBDA: f64 = 0.02;
const TOLERANCE: f64 = 1e-6;
const MAX_SWEEPS: usize = 10_000;

fn soft_threshold(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

/// Coefficients of an L1-penalized logistic regression,
/// `mean(log(1 + exp(-s·(w·x + b)))) + lambda·|w|₁` with `s = ±1` and an
/// unpenalized intercept.
///
/// Cyclic coordinate descent over features in column order, each step
/// minimizing the quadratic upper bound (curvature 1/4) of the loss, so the
/// objective never increases. Stops when no coordinate moved by more than
/// 1e-6 in a sweep, or after 10⁴ sweeps.
///
/// Exact duplicate columns are fitted once and the coefficient is split
/// evenly among the copies; the objective value is unchanged and the
/// copies get equal scores.
pub fn l1_logistic(x: &[Vec<f64>], y: &[usize], lambda: f64) -> Result<(Vec<f64>, f64)> {
    if x.is_empty() {
        return Err(Error::EmptyInput("training matrix"));
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { expected: x.len(), actual: y.len() });
    }
    if let Some(bad) = y.iter().find(|c| **c > 1) {
        return Err(Error::NonBinaryLabels(*bad));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("lambda must be nonnegative, got {lambda}")));
    }
    let n = x.len();
    let d = x[0].len();
    if let Some(r) = x.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, actual: r.len() });
    }

    // representative column for each feature
    let cols: Vec<Vec<f64>> = (0..d).map(|j| x.iter().map(|r| r[j]).collect()).collect();
    let mut rep: Vec<usize> = (0..d).collect();
    for j in 0..d {
        if let Some(k) = (0..j).find(|&k| rep[k] == k && cols[k] == cols[j]) {
            rep[j] = k;
        }
    }
    let unique: Vec<usize> = (0..d).filter(|&j| rep[j] == j).collect();

    let s: Vec<f64> = y.iter().map(|c| if *c == 1 { 1.0 } else { -1.0 }).collect();
    let nf = n as f64;
    let curvature: Vec<f64> = cols.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>() / (4.0 * nf)).collect();

    let mut w = alloc::vec![0.0; d];
    let mut b = 0.0;
    let mut margin = alloc::vec![0.0; n];
    for _ in 0..MAX_SWEEPS {
        let mut max_step: f64 = 0.0;

        let g: f64 = (0..n).map(|i| -s[i] * sigmoid(-s[i] * margin[i])).sum::<f64>() / nf;
        let step = -4.0 * g;
        b += step;
        margin.iter_mut().for_each(|m| *m += step);
        max_step = max_step.max(libm::fabs(step));

        for &j in &unique {
            let h = curvature[j];
            if h == 0.0 {
                continue;
            }
            let col = &cols[j];
            let g: f64 = (0..n).map(|i| -s[i] * col[i] * sigmoid(-s[i] * margin[i])).sum::<f64>() / nf;
            let new = soft_threshold(h * w[j] - g, lambda) / h;
            let delta = new - w[j];
            if delta != 0.0 {
                for i in 0..n {
                    margin[i] += delta * col[i];
                }
                w[j] = new;
                max_step = max_step.max(libm::fabs(delta));
            }
        }
        if max_step < TOLERANCE {
            break;
        }
    }

    let mut out = alloc::vec![0.0; d];
    for &j in &unique {
        let copies = rep.iter().filter(|r| **r == j).count() as f64;
        for k in 0..d {
            if rep[k] == j {
                out[k] = w[j] / copies;
            }
        }
    }
    Ok((out, b))
}

/// `|coefficient|` per feature. `x` should be standardized.
pub fn l1_score(x: &[Vec<f64>], y: &[usize], lambda: f64) -> Result<Vec<f64>> {
    Ok(l1_logistic(x, y, lambda)?.0.into_iter().map(libm::fabs).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;
    use alloc::vec;
    use rand::Rng as _;

    fn predictive_and_noise() -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut r = from_seed(5);
        let y: Vec<usize> = (0..200).map(|i| i % 2).collect();
        let x = y
            .iter()
            .map(|c| {
                let signal = if *c == 1 { 1.0 } else { -1.0 };
                vec![signal, r.gen::<f64>() * 2.0 - 1.0]
            })
            .collect();
        (x, y)
    }

    #[test]
    fn predictive_feature_survives_noise_does_not() {
        let (x, y) = predictive_and_noise();
        let s = l1_score(&x, &y, 0.05).unwrap();
        assert!(s[0] > 0.0);
        assert_eq!(s[1], 0.0);
    }

    #[test]
    fn huge_lambda_zeroes_everything() {
        let (x, y) = predictive_and_noise();
        assert!(l1_score(&x, &y, 1e6).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn duplicate_columns_score_equally() {
        let (x, y) = predictive_and_noise();
        let dup: Vec<Vec<f64>> = x.iter().map(|r| vec![r[0], r[1], r[0]]).collect();
        let s = l1_score(&dup, &y, 0.05).unwrap();
        let single = l1_score(&x, &y, 0.05).unwrap();
        assert_eq!(s[0], s[2]);
        assert!(s[0] > 0.0);
        assert!((s[0] * 2.0 - single[0]).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_binary_labels() {
        assert_eq!(l1_score(&[vec![1.0]], &[2], 0.1), Err(Error::NonBinaryLabels(2)));
    }
}
