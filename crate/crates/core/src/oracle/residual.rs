use super::problem::{build_problem, Kinetic, Picture, SturmLiouvilleProblem};
use crate::error::{Error, Result};
use crate::models::{PdmOrdering, RadialState};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    /// Largest scaled residual `|L f - e f| / (sum of |terms|)` over the used samples.
    pub max_residual: f64,
    pub used: usize,
    /// Samples where the function vanishes or a coefficient is not finite.
    pub skipped: Vec<f64>,
}

/// Scaled pointwise residual of the closed-form `state` in its radial equation.
///
/// Derivatives come from second-order jets, so the check involves no numerical
/// differentiation. The equation is linear in the function, so each term is divided by
/// its value, which keeps far power-law tails inside the floating-point range.
pub fn residual_norm(state: &RadialState, picture: Picture, samples: &[f64]) -> Result<ResidualReport> {
    let problem = build_problem(state.model, state.qn.ang(), picture)?;
    residual_in(&problem, state.qn.n_r(), samples)
}

pub(crate) fn residual_in(
    problem: &SturmLiouvilleProblem,
    n_r: u32,
    samples: &[f64],
) -> Result<ResidualReport> {
    let e = problem.reference_eigenvalue(n_r)?;
    let mut max_residual: f64 = 0.0;
    let mut used = 0;
    let mut skipped = Vec::new();
    for &x in samples {
        let v = problem.potential(x)?;
        let Some(f) = problem.eigenfunction_log_jet(n_r, x)? else {
            skipped.push(x);
            continue;
        };
        let terms = match problem.kinetic() {
            Kinetic::SelfAdjoint => {
                let p = problem.p_jet(x);
                let w = problem.w_jet(x);
                [-p.v * f.r2, -(p.d1 + p.v * w.d1 / w.v) * f.r1, v, -e]
            }
            Kinetic::VonRoos { xi, eta, zeta } => {
                // -(1/m) f'' - (1/m)' f' + (U_K + V) f, with U_K from the mass jet.
                let model = problem.model().expect("model problem");
                let m = model.pdm().expect("pdm model").mass_jet(crate::jet::Jet::var(x));
                let inv = m.recip();
                let u_k = PdmOrdering::VonRoos { xi, eta, zeta }.kinetic_potential(m);
                [-inv.v * f.r2, -inv.d1 * f.r1, u_k + v, -e]
            }
        };
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        let sum: f64 = terms.iter().sum();
        if !(scale.is_finite() && scale > 0.0) {
            skipped.push(x);
            continue;
        }
        used += 1;
        max_residual = max_residual.max(sum.abs() / scale);
    }
    if used == 0 {
        return Err(Error::InvalidArgument("no usable residual samples".into()));
    }
    Ok(ResidualReport { max_residual, used, skipped })
}
