use super::discretize::discretize;
use super::eigen::lowest_eigenvalues;
use super::problem::{build_problem, Picture, SturmLiouvilleProblem};
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use rayon::prelude::*;
use serde::Serialize;

/// Grid refinement record for one eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    /// Position in the spectrum at fixed angular number (= `n_r`).
    pub index: u32,
    pub grids: Vec<usize>,
    pub estimates: Vec<f64>,
    /// Order fitted to the three finest grids; absent when the sequence is not monotone.
    pub observed_order: Option<f64>,
    /// Second-order Richardson value from the two finest grids.
    pub extrapolated: Option<f64>,
    pub reference: f64,
    pub relative_error: Option<f64>,
    pub monotone: bool,
    /// Upper end of the physical region that was discretized.
    pub truncation: f64,
    /// Relative change of the finest estimate when the last cell is cut in half.
    pub endpoint_sensitivity: f64,
}

impl ConvergenceReport {
    pub fn passes(&self, rel_tol: f64, order_band: (f64, f64)) -> bool {
        let order_ok = self.observed_order.is_some_and(|p| p >= order_band.0 && p <= order_band.1);
        order_ok && self.relative_error.is_some_and(|e| e <= rel_tol)
    }
}

/// Solve `model` on each grid, then extrapolate and compare the lowest `k` eigenvalues
/// with their closed forms.
pub fn convergence_study(
    model: ModelSpec,
    picture: Picture,
    ang: f64,
    k: u32,
    grids: &[usize],
) -> Result<Vec<ConvergenceReport>> {
    let problem = build_problem(model, ang, picture)?.truncated_for_states(k)?;
    study_problem(&problem, k, grids)
}

pub fn study_problem(
    problem: &SturmLiouvilleProblem,
    k: u32,
    grids: &[usize],
) -> Result<Vec<ConvergenceReport>> {
    if grids.len() < 3 || grids.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "grids must be strictly increasing with at least 3 entries, got {grids:?}"
        )));
    }
    let k_us = k as usize;
    let spectra: Vec<Vec<f64>> = grids
        .par_iter()
        .map(|&n| lowest_eigenvalues(&discretize(problem, n)?, k_us))
        .collect::<Result<_>>()?;

    let finest = *grids.last().expect("nonempty");
    let (lo, hi) = problem.interval();
    let h = (hi - lo) / finest as f64;
    let shortened = problem.clone().with_upper(hi - 0.5 * h)?;
    let cut = lowest_eigenvalues(&discretize(&shortened, finest)?, k_us)?;

    (0..k)
        .map(|j| {
            let estimates: Vec<f64> = spectra.iter().map(|s| s[j as usize]).collect();
            let reference = problem.reference_eigenvalue(j)?;
            let diffs: Vec<f64> = estimates.windows(2).map(|w| w[1] - w[0]).collect();
            let monotone = diffs.iter().all(|d| *d >= 0.0) || diffs.iter().all(|d| *d <= 0.0);
            let m = grids.len();
            let (observed_order, extrapolated) = if monotone {
                let order = fit_order(
                    [grids[m - 3], grids[m - 2], grids[m - 1]],
                    [estimates[m - 3], estimates[m - 2], estimates[m - 1]],
                );
                let r = grids[m - 1] as f64 / grids[m - 2] as f64;
                let rich = estimates[m - 1] + (estimates[m - 1] - estimates[m - 2]) / (r * r - 1.0);
                (order, Some(rich))
            } else {
                (None, None)
            };
            let last = estimates[m - 1];
            Ok(ConvergenceReport {
                index: j,
                grids: grids.to_vec(),
                relative_error: extrapolated.map(|v| relative(v, reference)),
                estimates,
                observed_order,
                extrapolated,
                reference,
                monotone,
                truncation: problem.physical_interval().1,
                endpoint_sensitivity: relative(cut[j as usize], last),
            })
        })
        .collect()
}

fn relative(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
}

/// Convergence order `p` with `e(N) = e* + c N^{-p}` through three grid values.
fn fit_order(n: [usize; 3], e: [f64; 3]) -> Option<f64> {
    let (d1, d2) = (e[1] - e[0], e[2] - e[1]);
    if d1 == 0.0 || d2 == 0.0 {
        return None;
    }
    let target = d1 / d2;
    let h = n.map(|v| 1.0 / v as f64);
    let ratio = |p: f64| (h[0].powf(p) - h[1].powf(p)) / (h[1].powf(p) - h[2].powf(p));
    let (mut a, mut b) = (1e-3, 12.0);
    if !(target > ratio(a) && target < ratio(b)) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if ratio(mid) < target {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_fit_recovers_power_law() {
        let e = |n: usize| 3.0 + 5.0 / (n as f64).powi(2);
        let p = fit_order([100, 200, 400], [e(100), e(200), e(400)]).unwrap();
        assert!((p - 2.0).abs() < 1e-9);
        let e = |n: usize| 1.0 - 2.0 / (n as f64).powf(1.5);
        let p = fit_order([64, 96, 160], [e(64), e(96), e(160)]).unwrap();
        assert!((p - 1.5).abs() < 1e-9);
        assert!(fit_order([1, 2, 3], [1.0, 1.0, 2.0]).is_none());
    }
}
