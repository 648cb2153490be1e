//! Kendall's tau in O(n log n) (Knight's algorithm).
//!
//! Sort by the first coordinate, then count the bubble-sort swaps needed to
//! order the second via merge sort; with tie corrections this yields tau-b,
//! which coincides with plain tau on tie-free data such as rank
//! pseudo-observations.

use crate::error::{CsdError, Result};
use crate::estimator::PseudoSample;

/// Tau between two coordinates of a sample.
pub fn kendall_tau(sample: &PseudoSample, i: usize, j: usize) -> Result<f64> {
    let d = sample.dim();
    if i >= d || j >= d {
        return Err(CsdError::InvalidInput(format!(
            "coordinate indices ({i}, {j}) out of range for d = {d}"
        )));
    }
    kendall_tau_slices(&sample.column(i), &sample.column(j))
}

/// Tau-b between two equal-length sequences.
pub fn kendall_tau_slices(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let n = xs.len();
    if n != ys.len() {
        return Err(CsdError::InvalidInput("length mismatch".into()));
    }
    if n < 2 {
        return Err(CsdError::InvalidInput("kendall tau needs n >= 2".into()));
    }
    if xs.iter().any(|x| !x.is_finite()) || ys.iter().any(|y| !y.is_finite()) {
        return Err(CsdError::InvalidInput("non-finite value".into()));
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        xs[a].partial_cmp(&xs[b]).unwrap().then(ys[a].partial_cmp(&ys[b]).unwrap())
    });

    // Tie counts over the x-sorted order: pairs tied in x, and tied in both.
    let mut x_ties = 0u64;
    let mut xy_ties = 0u64;
    {
        let mut run_x = 1u64;
        let mut run_xy = 1u64;
        for w in 1..n {
            if xs[idx[w]] == xs[idx[w - 1]] {
                run_x += 1;
                if ys[idx[w]] == ys[idx[w - 1]] {
                    run_xy += 1;
                } else {
                    xy_ties += run_xy * (run_xy - 1) / 2;
                    run_xy = 1;
                }
            } else {
                x_ties += run_x * (run_x - 1) / 2;
                run_x = 1;
                xy_ties += run_xy * (run_xy - 1) / 2;
                run_xy = 1;
            }
        }
        x_ties += run_x * (run_x - 1) / 2;
        xy_ties += run_xy * (run_xy - 1) / 2;
    }

    let mut y_sorted_by_x: Vec<f64> = idx.iter().map(|&k| ys[k]).collect();
    let swaps = merge_count(&mut y_sorted_by_x);

    let mut y_ties = 0u64;
    {
        // y_sorted_by_x is now fully sorted by y.
        let mut run = 1u64;
        for w in 1..n {
            if y_sorted_by_x[w] == y_sorted_by_x[w - 1] {
                run += 1;
            } else {
                y_ties += run * (run - 1) / 2;
                run = 1;
            }
        }
        y_ties += run * (run - 1) / 2;
    }

    let total = (n as u64) * (n as u64 - 1) / 2;
    if x_ties == total || y_ties == total {
        return Err(CsdError::InvalidInput("degenerate: constant coordinate".into()));
    }
    let con_minus_dis =
        total as f64 - x_ties as f64 - y_ties as f64 + xy_ties as f64 - 2.0 * swaps as f64;
    let denom = ((total - x_ties) as f64 * (total - y_ties) as f64).sqrt();
    Ok(con_minus_dis / denom)
}

/// Merge sort in place, returning the number of inversions.
fn merge_count(a: &mut [f64]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mut buf = a.to_vec();
    sort_count(a, &mut buf)
}

fn sort_count(a: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (left, right) = a.split_at_mut(mid);
    let (bl, br) = buf.split_at_mut(mid);
    let mut inv = sort_count(left, bl) + sort_count(right, br);
    // merge with inversion counting (stable: ties are not inversions)
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < left.len() && j < right.len() {
        if right[j] < left[i] {
            buf[k] = right[j];
            inv += (left.len() - i) as u64;
            j += 1;
        } else {
            buf[k] = left[i];
            i += 1;
        }
        k += 1;
    }
    while i < left.len() {
        buf[k] = left[i];
        i += 1;
        k += 1;
    }
    while j < right.len() {
        buf[k] = right[j];
        j += 1;
        k += 1;
    }
    a.copy_from_slice(&buf[..n]);
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use approx::assert_relative_eq;
    use rand::Rng;

    /// O(n²) concordance count, tie-corrected, as the brute-force oracle.
    fn brute_tau(xs: &[f64], ys: &[f64]) -> f64 {
        let n = xs.len();
        let (mut con, mut dis, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = xs[i] - xs[j];
                let dy = ys[i] - ys[j];
                if dx == 0.0 && dy == 0.0 {
                    continue;
                } else if dx == 0.0 {
                    tx += 1;
                } else if dy == 0.0 {
                    ty += 1;
                } else if dx * dy > 0.0 {
                    con += 1;
                } else {
                    dis += 1;
                }
            }
        }
        let denom = (((con + dis + tx) as f64) * ((con + dis + ty) as f64)).sqrt();
        (con - dis) as f64 / denom
    }

    #[test]
    fn comonotone_is_one() {
        let xs: Vec<f64> = (0..50).map(|i| i as f64 / 50.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        assert_relative_eq!(kendall_tau_slices(&xs, &ys).unwrap(), 1.0, epsilon = 1e-14);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert_relative_eq!(kendall_tau_slices(&xs, &neg).unwrap(), -1.0, epsilon = 1e-14);
    }

    #[test]
    fn matches_brute_force_exactly() {
        let mut rng = rng_from_seed(314);
        let n = 200;
        let xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x + 0.5 * rng.random::<f64>()).collect();
        assert_relative_eq!(
            kendall_tau_slices(&xs, &ys).unwrap(),
            brute_tau(&xs, &ys),
            epsilon = 1e-13
        );
    }

    #[test]
    fn matches_brute_force_with_ties() {
        let mut rng = rng_from_seed(271);
        let n = 150;
        // coarse grid forces plenty of ties
        let xs: Vec<f64> = (0..n).map(|_| (rng.random::<f64>() * 6.0).floor()).collect();
        let ys: Vec<f64> = (0..n)
            .map(|i| ((xs[i] + rng.random::<f64>() * 8.0) / 2.0).floor())
            .collect();
        assert_relative_eq!(
            kendall_tau_slices(&xs, &ys).unwrap(),
            brute_tau(&xs, &ys),
            epsilon = 1e-13
        );
    }

    #[test]
    fn independent_uniforms_near_zero() {
        let mut rng = rng_from_seed(8);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let ys: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let tau = kendall_tau_slices(&xs, &ys).unwrap();
        assert!(tau.abs() < 0.02, "tau = {tau}");
    }

    #[test]
    fn degenerate_errors() {
        assert!(kendall_tau_slices(&[1.0], &[1.0]).is_err());
        assert!(kendall_tau_slices(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    }
}
