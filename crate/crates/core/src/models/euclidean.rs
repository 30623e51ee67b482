use super::{ensure, Domain, QuantumNumbers};
use crate::error::Result;
use crate::jet::{Jet, LogJet};
use crate::specfun::{laguerre_jet, LaguerreParams};

/// Isotropic `d`-dimensional harmonic oscillator of frequency `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanOscillator {
    d: u32,
    omega: f64,
}

impl EuclideanOscillator {
    pub fn new(d: u32, omega: f64) -> Result<Self> {
        ensure(d >= 2, || format!("oscillator dimension d must be >= 2, got {d}"))?;
        ensure(omega.is_finite() && omega > 0.0, || {
            format!("oscillator frequency omega must be positive, got {omega}")
        })?;
        Ok(Self { d, omega })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn domain(&self) -> Domain {
        Domain::HALF_LINE
    }

    /// `E_n = omega (n + d/2)` with `n = 2 n_r + l`.
    pub fn energy(&self, q: &QuantumNumbers) -> f64 {
        self.omega * (q.n() + 0.5 * self.d as f64)
    }

    /// `r^l exp(-omega r^2 / 2) L_{n_r}^{(l + (d-2)/2)}(omega r^2)`.
    pub fn wavefunction(&self, q: &QuantumNumbers, r: f64) -> Result<f64> {
        Ok(self.wavefunction_jet(q, r)?.v)
    }

    pub(crate) fn wavefunction_jet(&self, q: &QuantumNumbers, r: f64) -> Result<Jet> {
        self.domain().check_regular(r)?;
        let x = Jet::var(r);
        let l = q.ang();
        let w = self.omega;
        let arg = x * x * w;
        let poly = laguerre_jet(LaguerreParams::new(q.n_r(), l + 0.5 * (self.d as f64 - 2.0)), arg);
        Ok(power(x, l) * (arg * -0.5).exp() * poly)
    }

    pub(crate) fn wavefunction_log_jet(&self, q: &QuantumNumbers, r: f64) -> Result<Option<LogJet>> {
        self.domain().check_regular(r)?;
        let x = Jet::var(r);
        let arg = x * x * self.omega;
        let poly = laguerre_jet(LaguerreParams::new(q.n_r(), q.ang() + 0.5 * (self.d as f64 - 2.0)), arg);
        Ok(log_power(x, q.ang()).zip(LogJet::from_jet(poly)).map(|(p, poly)| {
            p * LogJet::exp_of(arg * -0.5) * poly
        }))
    }
}

/// `D`-dimensional Coulomb problem with coupling `Q` (potential `-Q/R` in the `2E` convention).
///
/// `D` is real: the duality map produces half-integral `D` from odd `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanCoulomb {
    dim: f64,
    q: f64,
}

impl EuclideanCoulomb {
    pub fn new(dim: f64, q: f64) -> Result<Self> {
        ensure(dim.is_finite() && dim > 1.0, || {
            format!("Coulomb dimension D must exceed 1, got {dim}")
        })?;
        ensure(q.is_finite() && q > 0.0, || format!("coupling Q must be positive, got {q}"))?;
        Ok(Self { dim, q })
    }

    pub fn dim(&self) -> f64 {
        self.dim
    }

    pub fn coupling(&self) -> f64 {
        self.q
    }

    pub fn domain(&self) -> Domain {
        Domain::HALF_LINE
    }

    /// `E_nu = -Q^2 / (2 (2 nu + D - 1)^2)`.
    pub fn energy(&self, qn: &QuantumNumbers) -> f64 {
        let den = 2.0 * qn.nu() + self.dim - 1.0;
        -self.q * self.q / (2.0 * den * den)
    }

    /// Decay constant `sqrt(2 |E_nu|) = Q / (2 nu + D - 1)`.
    pub fn kappa(&self, qn: &QuantumNumbers) -> f64 {
        self.q / (2.0 * qn.nu() + self.dim - 1.0)
    }

    /// `R^L exp(-kappa R) L_{n_r}^{(2L + D - 2)}(2 kappa R)`.
    pub fn wavefunction(&self, qn: &QuantumNumbers, r: f64) -> Result<f64> {
        Ok(self.wavefunction_jet(qn, r)?.v)
    }

    pub(crate) fn wavefunction_jet(&self, qn: &QuantumNumbers, r: f64) -> Result<Jet> {
        self.domain().check_regular(r)?;
        let x = Jet::var(r);
        let big_l = qn.ang();
        let kappa = (2.0 * self.energy(qn).abs()).sqrt();
        let poly = laguerre_jet(
            LaguerreParams::new(qn.n_r(), 2.0 * big_l + self.dim - 2.0),
            x * (2.0 * kappa),
        );
        Ok(power(x, big_l) * (x * -kappa).exp() * poly)
    }

    pub(crate) fn wavefunction_log_jet(&self, qn: &QuantumNumbers, r: f64) -> Result<Option<LogJet>> {
        self.domain().check_regular(r)?;
        let x = Jet::var(r);
        let kappa = (2.0 * self.energy(qn).abs()).sqrt();
        let poly = laguerre_jet(
            LaguerreParams::new(qn.n_r(), 2.0 * qn.ang() + self.dim - 2.0),
            x * (2.0 * kappa),
        );
        Ok(log_power(x, qn.ang()).zip(LogJet::from_jet(poly)).map(|(p, poly)| {
            p * LogJet::exp_of(x * -kappa) * poly
        }))
    }
}

/// `x^p` as a jet, with `x^0 = 1` exactly so the origin stays regular.
/// [`power`] as a [`LogJet`]; `None` at `x = 0`.
pub(crate) fn log_power(x: Jet, p: f64) -> Option<LogJet> {
    LogJet::from_jet(x).map(|l| l.powf(p))
}

pub(crate) fn power(x: Jet, p: f64) -> Jet {
    if p == 0.0 {
        Jet::constant(1.0)
    } else if p.fract() == 0.0 && p.abs() < 64.0 {
        x.powi(p as i32)
    } else {
        x.powf(p)
    }
}
