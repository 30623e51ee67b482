//! The `r = sqrt(R)` map between oscillator and Coulomb radial problems.
//!
//! Substituting `r^2 = R` turns the `d`-dimensional oscillator radial equation
//! into a `D = (d+2)/2` dimensional Coulomb one in which the oscillator energy
//! becomes the Coulomb coupling and the oscillator frequency fixes the Coulomb
//! energy. The same substitution maps the curved-space nonlinear oscillator to
//! the Coulomb-like problem.

use crate::error::{Error, Result};
use crate::models::{
    CoulombLike, EuclideanCoulomb, EuclideanOscillator, ModelSpec, NonlinearOscillator,
    QuantumNumbers,
};
use serde::Serialize;

/// Coulomb-side parameters `(D, L, Q, E)` produced by the map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualMap {
    pub dim: f64,
    pub big_l: f64,
    pub q: f64,
    pub energy: f64,
}

/// An oscillator state and the Coulomb state it maps to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualPair {
    pub oscillator: ModelSpec,
    pub oscillator_qn: QuantumNumbers,
    pub coulomb: ModelSpec,
    pub coulomb_qn: QuantumNumbers,
    pub map: DualMap,
    /// Odd `l` gives half-integral `L`, which has no integer-`l` Coulomb counterpart.
    pub no_integer_preimage: bool,
}

/// Euclidean map: `D = (d+2)/2`, `L = l/2`, `Q = E/2`, `E_C = -omega^2/8`.
pub fn map_euclidean(d: u32, l: u32, omega: f64, n_r: u32) -> Result<DualPair> {
    let osc = EuclideanOscillator::new(d, omega)?;
    let oqn = QuantumNumbers::integral(n_r, l);
    let dim = 0.5 * (d as f64 + 2.0);
    let big_l = 0.5 * l as f64;
    let q = 0.5 * osc.energy(&oqn);
    let coulomb = EuclideanCoulomb::new(dim, q)?;
    let cqn = QuantumNumbers::new(n_r, big_l)?;
    let energy = -omega * omega / 8.0;
    debug_assert!((coulomb.energy(&cqn) - energy).abs() <= 1e-12 * energy.abs());
    Ok(DualPair {
        oscillator: ModelSpec::Oscillator(osc),
        oscillator_qn: oqn,
        coulomb: ModelSpec::Coulomb(coulomb),
        coulomb_qn: cqn,
        map: DualMap { dim, big_l, q, energy },
        no_integer_preimage: l % 2 == 1,
    })
}

/// Curved map: `Q = [E - 2 lambda L (L + D - 2)]/2`, `E_C = -beta(beta+lambda)/8 + lambda E/4`.
pub fn map_curved(d: u32, l: u32, lambda: f64, beta: f64, n_r: u32) -> Result<DualPair> {
    let osc = NonlinearOscillator::new(d, lambda, beta)?;
    let oqn = QuantumNumbers::integral(n_r, l);
    if !osc.is_normalizable(&oqn) {
        return Err(Error::NonNormalizable(format!(
            "oscillator state n = {} exceeds the normalizable range {:?}",
            oqn.n(),
            osc.n_max()
        )));
    }
    let dim = 0.5 * (d as f64 + 2.0);
    let big_l = 0.5 * l as f64;
    let e = osc.energy(&oqn);
    let q = 0.5 * (e - 2.0 * lambda * big_l * (big_l + dim - 2.0));
    let coulomb = CoulombLike::new(dim, lambda, q)?;
    let cqn = QuantumNumbers::new(n_r, big_l)?;
    let energy = -osc.alpha_squared() / 8.0 + lambda * e / 4.0;
    debug_assert!((coulomb.energy(&cqn) - energy).abs() <= 1e-10 * energy.abs().max(1.0));
    Ok(DualPair {
        oscillator: ModelSpec::Nonlinear(osc),
        oscillator_qn: oqn,
        coulomb: ModelSpec::CoulombLike(coulomb),
        coulomb_qn: cqn,
        map: DualMap { dim, big_l, q, energy },
        no_integer_preimage: l % 2 == 1,
    })
}

/// Oscillator `beta` whose dual state has coupling `Q`; `lambda = 0` gives the frequency.
pub fn beta_from_coupling(dim: f64, lambda: f64, q: f64, n_r: u32, big_l: f64) -> Result<f64> {
    let beta = invert_coupling(dim, lambda, q, n_r, big_l)?;
    if !(beta > 0.0 && beta * (beta + lambda) > 0.0) {
        return Err(Error::InvalidModel(format!(
            "coupling Q = {q} inverts to beta = {beta}, which violates beta > 0, beta (beta + lambda) > 0"
        )));
    }
    Ok(beta)
}

fn invert_coupling(dim: f64, lambda: f64, q: f64, n_r: u32, big_l: f64) -> Result<f64> {
    let qn = QuantumNumbers::new(n_r, big_l)?;
    let nu = qn.nu();
    let den = nu + 0.5 * (dim - 1.0);
    if !(den > 0.0) {
        return Err(Error::InvalidModel(format!("nu + (D-1)/2 must be positive, got {den}")));
    }
    Ok((q + lambda * (nu * (nu + dim - 1.5) + big_l * (big_l + dim - 2.0))) / den)
}

/// Coulomb-like energy computed through the dual oscillator: invert for `beta`, take the
/// oscillator energy in dimension `2D - 2` at `l = 2L`, then apply the energy map.
///
/// The oscillator energy is used as an algebraic expression in `beta`, so states whose
/// inverted `beta` lies in `(0, |lambda|]` (no oscillator with real `alpha`) are covered too.
pub fn energy_via_oscillator(model: &CoulombLike, qn: &QuantumNumbers) -> Result<f64> {
    let lambda = model.lambda();
    let beta = invert_coupling(model.dim(), lambda, model.coupling(), qn.n_r(), qn.ang())?;
    let d = 2.0 * model.dim() - 2.0;
    let n = 2.0 * qn.n_r() as f64 + 2.0 * qn.ang();
    let e = beta * (n + 0.5 * d) - 0.5 * lambda * n * (n + d - 1.0);
    Ok(-beta * (beta + lambda) / 8.0 + lambda * e / 4.0)
}

/// Outcome of comparing a Coulomb-side function with its oscillator preimage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointwiseCheck {
    /// Largest relative deviation of `S(R) / psi(sqrt R)` from its median.
    pub deviation: f64,
    pub median_ratio: f64,
    pub used: usize,
    /// Samples dropped because the oscillator function (nearly) vanishes there.
    pub skipped: Vec<f64>,
}

impl PointwiseCheck {
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.deviation <= tol
    }
}

pub fn verify_pointwise(pair: &DualPair, samples: &[f64]) -> Result<PointwiseCheck> {
    let domain = pair.coulomb.domain();
    let mut values = Vec::with_capacity(samples.len());
    for &big_r in samples {
        domain.check_open(big_r)?;
        let s = pair.coulomb.wavefunction(&pair.coulomb_qn, big_r)?;
        let psi = pair.oscillator.wavefunction(&pair.oscillator_qn, big_r.sqrt())?;
        values.push((big_r, s, psi));
    }
    let peak = values.iter().map(|v| v.2.abs()).fold(0.0, f64::max);
    let (kept, dropped): (Vec<_>, Vec<_>) = values
        .into_iter()
        .partition(|&(_, s, psi)| psi.abs() > 1e-8 * peak && psi.is_normal() && s.is_finite());
    if kept.is_empty() {
        return Err(Error::InvalidArgument(
            "every sample sits on a node of the oscillator function".into(),
        ));
    }
    let mut ratios: Vec<f64> = kept.iter().map(|&(_, s, psi)| s / psi).collect();
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    let deviation = ratios
        .drain(..)
        .map(|r| ((r - median) / median).abs())
        .fold(0.0, f64::max);
    Ok(PointwiseCheck {
        deviation: if median == 0.0 { f64::INFINITY } else { deviation },
        median_ratio: median,
        used: kept.len(),
        skipped: dropped.into_iter().map(|v| v.0).collect(),
    })
}
