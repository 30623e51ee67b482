use super::problem::SturmLiouvilleProblem;
use crate::error::{Error, Result};
use serde::Serialize;

/// Symmetric tridiagonal finite-difference operator on a half-cell grid.
///
/// Row `i` lives at `s_i = s_lo + (i + 1/2) h`. The matrix acts on `u = W^{1/2} f`
/// so that it is symmetric even though the continuous operator is only
/// self-adjoint with respect to `w dx`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteOperator {
    /// Nodes in chart coordinates.
    pub s_nodes: Vec<f64>,
    /// The same nodes in the physical radial coordinate.
    pub nodes: Vec<f64>,
    pub h: f64,
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl DiscreteOperator {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }
}

/// Smallest grid accepted for closed-form model problems.
pub const MIN_MODEL_GRID: usize = 16;

/// Discretize on `n` cells using the symmetric sandwich
/// `K = (A D^T B D C + C D^T B D A)/2`, with `A, C` sampled at nodes and `B` at faces.
pub fn discretize(problem: &SturmLiouvilleProblem, n: usize) -> Result<DiscreteOperator> {
    let min = if problem.is_custom() { 1 } else { MIN_MODEL_GRID };
    if n < min {
        return Err(Error::InvalidArgument(format!("grid needs at least {min} cells, got {n}")));
    }
    let (lo, hi) = problem.interval();
    if !hi.is_finite() {
        return Err(Error::InvalidArgument(
            "infinite computational interval; truncate the problem first".into(),
        ));
    }
    let h = (hi - lo) / n as f64;
    let h2 = h * h;
    let s_nodes: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect();
    let factors: Vec<(f64, f64)> = s_nodes.iter().map(|&s| problem.node_factors(s)).collect();
    let faces: Vec<f64> = (0..=n).map(|i| problem.face_flux(lo + i as f64 * h)).collect();
    let mut diag: Vec<f64> = s_nodes.iter().map(|&s| problem.node_potential(s)).collect();
    let mut off = vec![0.0; n.saturating_sub(1)];
    for i in 0..n {
        let (a, c) = factors[i];
        let left = if i == 0 { problem.left.face_factor() } else { 1.0 };
        let right = if i + 1 == n { problem.right.face_factor() } else { 1.0 };
        diag[i] += a * c * (left * faces[i] + right * faces[i + 1]) / h2;
        if i + 1 < n {
            let (a1, c1) = factors[i + 1];
            off[i] = -0.5 * (a * c1 + c * a1) * faces[i + 1] / h2;
        }
    }
    if let Some(bad) = diag.iter().chain(off.iter()).find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(if bad.is_nan() {
            "discretized coefficient (NaN)"
        } else {
            "discretized coefficient (infinite)"
        }));
    }
    let nodes = s_nodes.iter().map(|&s| problem.chart().x(s)).collect();
    Ok(DiscreteOperator { s_nodes, nodes, h, diag, off })
}
