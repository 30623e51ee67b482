//! Closed-form spectra and wavefunctions of the six radial problems.
//!
//! Units are `hbar = m = 1` throughout. Radial equations are written with the
//! energy entering as `2E`, and every wavefunction is returned unnormalized;
//! numerical normalization lives in [`crate::quadrature`].

mod curved;
mod euclidean;
mod pdm;

pub use curved::{CoulombLike, LevelBound, NonlinearOscillator, WavefunctionParams};
pub use euclidean::{EuclideanCoulomb, EuclideanOscillator};
pub use pdm::{oscillator_tilde_factor, PdmKind, PdmModel, PdmOrdering};

use crate::error::{Error, Result};
use crate::jet::{Jet, LogJet};
use serde::Serialize;

/// Open radial interval `(lo, hi)`; `hi` is `f64::INFINITY` for unbounded problems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub const HALF_LINE: Domain = Domain { lo: 0.0, hi: f64::INFINITY };

    pub fn is_finite(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// Closed-form wavefunctions are regular at the origin, so `x = lo` is accepted.
    pub(crate) fn check_regular(&self, x: f64) -> Result<()> {
        if x.is_finite() && x >= self.lo && x < self.hi {
            Ok(())
        } else {
            Err(self.out_of_domain(x))
        }
    }

    pub(crate) fn check_open(&self, x: f64) -> Result<()> {
        if x.is_finite() && self.contains(x) {
            Ok(())
        } else {
            Err(self.out_of_domain(x))
        }
    }

    fn out_of_domain(&self, x: f64) -> Error {
        Error::OutOfDomain { coordinate: x, lo: self.lo, hi: self.hi }
    }
}

/// Radial quantum number `n_r` and angular quantum number (`l` or `L`).
///
/// The angular number may be half-integral: the `r = sqrt(R)` map sends an
/// oscillator state with odd `l` to `L = l/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumNumbers {
    n_r: u32,
    ang: f64,
}

impl QuantumNumbers {
    pub fn new(n_r: u32, ang: f64) -> Result<Self> {
        if !ang.is_finite() || ang < 0.0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "angular quantum number must be a nonnegative real, got {ang}"
            )));
        }
        if (2.0 * ang).fract() != 0.0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "angular quantum number must be a multiple of 1/2, got {ang}"
            )));
        }
        Ok(Self { n_r, ang })
    }

    /// Shorthand for integral angular momentum.
    pub fn integral(n_r: u32, ang: u32) -> Self {
        Self { n_r, ang: ang as f64 }
    }

    pub fn n_r(&self) -> u32 {
        self.n_r
    }

    pub fn ang(&self) -> f64 {
        self.ang
    }

    pub fn has_integral_ang(&self) -> bool {
        self.ang.fract() == 0.0
    }

    /// Oscillator principal number `n = 2 n_r + l`.
    pub fn n(&self) -> f64 {
        2.0 * self.n_r as f64 + self.ang
    }

    /// Coulomb principal combination `nu = n_r + L`.
    pub fn nu(&self) -> f64 {
        self.n_r as f64 + self.ang
    }
}

/// Which side of the oscillator/Coulomb duality a model sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Oscillator,
    Coulomb,
}

/// One of the six radial problems together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Oscillator(EuclideanOscillator),
    Coulomb(EuclideanCoulomb),
    Nonlinear(NonlinearOscillator),
    CoulombLike(CoulombLike),
    PdmOscillator(NonlinearOscillator),
    PdmCoulomb(CoulombLike),
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Oscillator(_) => "osc",
            ModelSpec::Coulomb(_) => "coulomb",
            ModelSpec::Nonlinear(_) => "nlo",
            ModelSpec::CoulombLike(_) => "clike",
            ModelSpec::PdmOscillator(_) => "pdm-osc",
            ModelSpec::PdmCoulomb(_) => "pdm-coulomb",
        }
    }

    pub fn family(&self) -> Family {
        match self {
            ModelSpec::Oscillator(_) | ModelSpec::Nonlinear(_) | ModelSpec::PdmOscillator(_) => {
                Family::Oscillator
            }
            _ => Family::Coulomb,
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            ModelSpec::Oscillator(_) | ModelSpec::Coulomb(_) => Domain::HALF_LINE,
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => m.domain(),
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => m.domain(),
        }
    }

    /// Curvature parameter; zero for the Euclidean problems.
    pub fn lambda(&self) -> f64 {
        match self {
            ModelSpec::Oscillator(_) | ModelSpec::Coulomb(_) => 0.0,
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => m.lambda(),
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => m.lambda(),
        }
    }

    /// The PDM reinterpretation, available for the curved models.
    pub fn pdm(&self) -> Option<PdmModel> {
        match *self {
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => Some(PdmModel::Oscillator(m)),
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => Some(PdmModel::Coulomb(m)),
            _ => None,
        }
    }

    /// Energy entering the weighted-measure radial equation as `2E`.
    pub fn energy(&self, q: &QuantumNumbers) -> f64 {
        match self {
            ModelSpec::Oscillator(m) => m.energy(q),
            ModelSpec::Coulomb(m) => m.energy(q),
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => m.energy(q),
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => m.energy(q),
        }
    }

    /// Whether the closed-form state is normalizable on the model's domain.
    pub fn is_bound(&self, q: &QuantumNumbers) -> bool {
        match self {
            ModelSpec::Oscillator(_) | ModelSpec::Coulomb(_) => true,
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => m.is_normalizable(q),
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => m.is_admissible(q),
        }
    }

    pub fn wavefunction(&self, q: &QuantumNumbers, x: f64) -> Result<f64> {
        match self {
            ModelSpec::Oscillator(m) => m.wavefunction(q, x),
            ModelSpec::Coulomb(m) => m.wavefunction(q, x),
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => m.wavefunction(q, x),
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => m.wavefunction(q, x),
        }
    }

    pub(crate) fn wavefunction_log_jet(&self, q: &QuantumNumbers, x: f64) -> Result<Option<LogJet>> {
        match self {
            ModelSpec::Oscillator(m) => m.wavefunction_log_jet(q, x),
            ModelSpec::Coulomb(m) => m.wavefunction_log_jet(q, x),
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => m.wavefunction_log_jet(q, x),
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => m.wavefunction_log_jet(q, x),
        }
    }

    /// Factor turning the weighted-measure wavefunction into the flat-measure one.
    ///
    /// For the Euclidean models this is the `lambda = 0` case of the PDM factor.
    pub fn tilde_factor(&self, x: f64) -> Result<f64> {
        Ok(self.tilde_factor_jet(x)?.v)
    }

    pub(crate) fn tilde_factor_jet(&self, x: f64) -> Result<Jet> {
        self.domain().check_regular(x)?;
        let xj = Jet::var(x);
        Ok(match self {
            ModelSpec::Oscillator(m) => xj.powf(0.5 * (m.d() as f64 - 1.0)),
            ModelSpec::Coulomb(m) => xj.powf(0.5 * (m.dim() - 1.0)),
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => {
                pdm::oscillator_tilde_jet(m.d() as f64, m.lambda(), xj)
            }
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => {
                pdm::coulomb_tilde_jet(m.dim(), m.lambda(), xj)
            }
        })
    }

    pub(crate) fn tilde_factor_log_jet(&self, x: f64) -> Result<Option<LogJet>> {
        self.domain().check_regular(x)?;
        let xj = Jet::var(x);
        Ok(match self {
            ModelSpec::Oscillator(m) => euclidean::log_power(xj, 0.5 * (m.d() as f64 - 1.0)),
            ModelSpec::Coulomb(m) => euclidean::log_power(xj, 0.5 * (m.dim() - 1.0)),
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => {
                pdm::oscillator_tilde_log_jet(m.d() as f64, m.lambda(), xj)
            }
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => {
                pdm::coulomb_tilde_log_jet(m.dim(), m.lambda(), xj)
            }
        })
    }
}

/// A model, a pair of quantum numbers, and the closed-form radial function they select.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialState {
    pub model: ModelSpec,
    pub qn: QuantumNumbers,
}

impl RadialState {
    pub fn new(model: ModelSpec, qn: QuantumNumbers) -> Self {
        Self { model, qn }
    }

    pub fn energy(&self) -> f64 {
        self.model.energy(&self.qn)
    }

    /// Unnormalized weighted-measure wavefunction.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.model.wavefunction(&self.qn, x)
    }

    /// Unnormalized flat-measure wavefunction.
    pub fn eval_tilde(&self, x: f64) -> Result<f64> {
        Ok(self.model.tilde_factor(x)? * self.eval(x)?)
    }

    /// Weighted wavefunction given the metric factor `g = 1 + lambda x^2` (oscillators) or
    /// `1 + lambda x` (Coulomb-like) exactly; Euclidean models ignore `g`.
    pub(crate) fn eval_with_metric(&self, x: f64, g: f64) -> Result<f64> {
        match self.model {
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => {
                Ok(m.wavefunction_with_metric(&self.qn, x, g))
            }
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => {
                Ok(m.wavefunction_with_metric(&self.qn, x, g))
            }
            _ => self.eval(x),
        }
    }

    /// Flat-measure counterpart of [`Self::eval_with_metric`].
    pub(crate) fn eval_tilde_with_metric(&self, x: f64, g: f64) -> Result<f64> {
        let factor = match self.model {
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => {
                power_value(x, 0.5 * (m.d() as f64 - 1.0)) * g.powf(-0.25)
            }
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => {
                power_value(x, 0.5 * (m.dim() - 1.0)) * g.powf(-0.75)
            }
            _ => return self.eval_tilde(x),
        };
        Ok(factor * self.eval_with_metric(x, g)?)
    }

    /// Weighted wavefunction as a logarithmic jet; `None` where it vanishes.
    pub(crate) fn log_jet(&self, x: f64) -> Result<Option<LogJet>> {
        self.model.wavefunction_log_jet(&self.qn, x)
    }

    pub(crate) fn tilde_log_jet(&self, x: f64) -> Result<Option<LogJet>> {
        Ok(self.model.tilde_factor_log_jet(x)?.zip(self.log_jet(x)?).map(|(t, f)| t * f))
    }
}

fn power_value(x: f64, p: f64) -> f64 {
    euclidean::power(Jet::constant(x), p).v
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidModel(msg()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_number_validation() {
        assert!(QuantumNumbers::new(0, 0.5).is_ok());
        assert!(QuantumNumbers::new(0, 0.25).is_err());
        assert!(QuantumNumbers::new(0, -1.0).is_err());
        assert!(QuantumNumbers::new(0, f64::NAN).is_err());
        let q = QuantumNumbers::integral(2, 3);
        assert_eq!(q.n(), 7.0);
        assert_eq!(q.nu(), 5.0);
    }

    #[test]
    fn domain_checks() {
        let d = Domain { lo: 0.0, hi: 2.0 };
        assert!(d.check_regular(0.0).is_ok());
        assert!(d.check_open(0.0).is_err());
        assert!(d.check_regular(2.0).is_err());
        assert!(d.check_regular(-0.1).is_err());
    }
}
