use super::discretize::DiscreteOperator;
use crate::error::{Error, Result};

/// Number of eigenvalues strictly below `x` (Sturm sequence of leading minors).
pub fn count_below(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    for i in 0..diag.len() {
        if i > 0 {
            q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        }
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues in ascending order, by bisection on Sturm counts.
pub fn lowest_eigenvalues(op: &DiscreteOperator, k: usize) -> Result<Vec<f64>> {
    tridiagonal_lowest(&op.diag, &op.off, k)
}

pub fn tridiagonal_lowest(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} must lie in 1..={n}")));
    }
    if off.len() + 1 != n {
        return Err(Error::InvalidArgument("off-diagonal length must be n - 1".into()));
    }
    // Gershgorin enclosure.
    let radius = |i: usize| {
        let l = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let r = if i + 1 < n { off[i].abs() } else { 0.0 };
        l + r
    };
    let lo = (0..n).map(|i| diag[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let hi = (0..n).map(|i| diag[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    let span = (hi - lo).max(hi.abs()).max(lo.abs()).max(f64::MIN_POSITIVE);
    let max_off2 = off.iter().map(|e| e * e).fold(0.0, f64::max);
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * max_off2).max(1e-290);
    let (lo, hi) = (lo - 2.0 * f64::EPSILON * span, hi + 2.0 * f64::EPSILON * span);

    let mut out = Vec::with_capacity(k);
    let mut floor = lo;
    for j in 0..k {
        // Smallest x with count_below(x) > j.
        let (mut a, mut b) = (floor, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if count_below(diag, off, mid, pivmin) > j {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 2.0 * f64::EPSILON * a.abs().max(b.abs()) {
                break;
            }
        }
        let value = 0.5 * (a + b);
        out.push(value);
        floor = a;
    }
    Ok(out)
}
