use super::euclidean::{log_power, power};
use super::{ensure, Domain, QuantumNumbers};
use crate::error::{Error, Result};
use crate::jet::{Jet, LogJet};
use crate::specfun::{jacobi_jet, JacobiParams};
use serde::Serialize;

/// Range of the oscillator principal number `n` admitted by normalizability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LevelBound {
    /// `lambda < 0`: every `n` is a bound state.
    Unbounded,
    /// `lambda > 0`: `n = 0, 1, ..., n_max`.
    UpTo(u32),
    /// `lambda > 0` and even `n = 0` fails to normalize.
    NoBoundStates,
}

/// `d`-dimensional nonlinear oscillator on a space of constant curvature `-lambda`.
///
/// The potential strength is tied to `beta` by `alpha^2 = beta (beta + lambda)`,
/// the only choice for which the radial problem is exactly solvable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearOscillator {
    d: u32,
    lambda: f64,
    beta: f64,
}

impl NonlinearOscillator {
    pub fn new(d: u32, lambda: f64, beta: f64) -> Result<Self> {
        ensure(d >= 2, || format!("oscillator dimension d must be >= 2, got {d}"))?;
        ensure(lambda.is_finite() && lambda != 0.0, || {
            format!("curvature parameter lambda must be finite and nonzero, got {lambda}")
        })?;
        ensure(beta.is_finite() && beta > 0.0, || format!("beta must be positive, got {beta}"))?;
        ensure(beta * (beta + lambda) > 0.0, || {
            format!("alpha^2 = beta (beta + lambda) must be positive, got {}", beta * (beta + lambda))
        })?;
        Ok(Self { d, lambda, beta })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha_squared(&self) -> f64 {
        self.beta * (self.beta + self.lambda)
    }

    pub fn domain(&self) -> Domain {
        if self.lambda < 0.0 {
            Domain { lo: 0.0, hi: 1.0 / (-self.lambda).sqrt() }
        } else {
            Domain::HALF_LINE
        }
    }

    /// `E_n = beta (n + d/2) - (lambda/2) n (n + d - 1)`.
    ///
    /// Returned for every `n`; use [`Self::is_normalizable`] to tell bound states apart.
    pub fn energy(&self, q: &QuantumNumbers) -> f64 {
        let n = q.n();
        let d = self.d as f64;
        self.beta * (n + 0.5 * d) - 0.5 * self.lambda * n * (n + d - 1.0)
    }

    /// Largest normalizable `n`: `beta/lambda - (d+1)/2 <= n_max < beta/lambda - (d-1)/2`.
    pub fn n_max(&self) -> LevelBound {
        if self.lambda < 0.0 {
            return LevelBound::Unbounded;
        }
        let lower = self.beta / self.lambda - 0.5 * (self.d as f64 + 1.0);
        let n = (lower - 1e-12 * lower.abs().max(1.0)).ceil();
        if n < 0.0 {
            LevelBound::NoBoundStates
        } else {
            LevelBound::UpTo(n as u32)
        }
    }

    pub fn is_normalizable(&self, q: &QuantumNumbers) -> bool {
        match self.n_max() {
            LevelBound::Unbounded => true,
            LevelBound::UpTo(n_max) => q.n() <= n_max as f64,
            LevelBound::NoBoundStates => false,
        }
    }

    pub fn jacobi_params(&self, q: &QuantumNumbers) -> JacobiParams {
        JacobiParams::new(
            q.n_r(),
            q.ang() + 0.5 * (self.d as f64 - 2.0),
            -self.beta / self.lambda - 0.5,
        )
    }

    /// `r^l (1 + lambda r^2)^{-beta/(2 lambda)} P_{n_r}^{(l + (d-2)/2, -beta/lambda - 1/2)}(1 + 2 lambda r^2)`.
    pub fn wavefunction(&self, q: &QuantumNumbers, r: f64) -> Result<f64> {
        Ok(self.wavefunction_jet(q, r)?.v)
    }

    /// [`Self::wavefunction`] with `g = 1 + lambda r^2` supplied exactly.
    pub(crate) fn wavefunction_with_metric(&self, q: &QuantumNumbers, r: f64, g: f64) -> f64 {
        let poly = crate::specfun::jacobi(self.jacobi_params(q), 2.0 * g - 1.0).unwrap_or(f64::NAN);
        power(Jet::constant(r), q.ang()).v * g.powf(-self.beta / (2.0 * self.lambda)) * poly
    }

    pub(crate) fn wavefunction_jet(&self, q: &QuantumNumbers, r: f64) -> Result<Jet> {
        self.domain().check_regular(r)?;
        let x = Jet::var(r);
        let r2 = x * x;
        let g = r2 * self.lambda + 1.0;
        let poly = jacobi_jet(self.jacobi_params(q), r2 * (2.0 * self.lambda) + 1.0);
        Ok(power(x, q.ang()) * g.powf(-self.beta / (2.0 * self.lambda)) * poly)
    }

    pub(crate) fn wavefunction_log_jet(&self, q: &QuantumNumbers, r: f64) -> Result<Option<LogJet>> {
        self.domain().check_regular(r)?;
        let x = Jet::var(r);
        let r2 = x * x;
        let g = LogJet::from_jet(r2 * self.lambda + 1.0);
        let poly = LogJet::from_jet(jacobi_jet(self.jacobi_params(q), r2 * (2.0 * self.lambda) + 1.0));
        Ok(match (log_power(x, q.ang()), g, poly) {
            (Some(p), Some(g), Some(poly)) => Some(p * g.powf(-self.beta / (2.0 * self.lambda)) * poly),
            _ => None,
        })
    }
}

/// Exponents `(rho, sigma, tau)` of the Coulomb-like radial function
/// `R^L (1 + lambda R)^tau P_{n_r}^{(rho, sigma)}(1 + 2 lambda R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavefunctionParams {
    pub rho: f64,
    pub sigma: f64,
    pub tau: f64,
}

/// `D`-dimensional `-Q/R` problem on a space of nonconstant curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombLike {
    dim: f64,
    lambda: f64,
    q: f64,
}

impl CoulombLike {
    pub fn new(dim: f64, lambda: f64, q: f64) -> Result<Self> {
        ensure(dim.is_finite() && dim > 1.0, || {
            format!("Coulomb dimension D must exceed 1, got {dim}")
        })?;
        ensure(lambda.is_finite() && lambda != 0.0, || {
            format!("curvature parameter lambda must be finite and nonzero, got {lambda}")
        })?;
        ensure(q.is_finite() && q > 0.0, || format!("coupling Q must be positive, got {q}"))?;
        Ok(Self { dim, lambda, q })
    }

    pub fn dim(&self) -> f64 {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn coupling(&self) -> f64 {
        self.q
    }

    pub fn domain(&self) -> Domain {
        if self.lambda < 0.0 {
            Domain { lo: 0.0, hi: -1.0 / self.lambda }
        } else {
            Domain::HALF_LINE
        }
    }

    fn centrifugal(&self, big_l: f64) -> f64 {
        big_l * (big_l + self.dim - 2.0)
    }

    pub fn energy(&self, qn: &QuantumNumbers) -> f64 {
        let (nu, big_l, dim, lam) = (qn.nu(), qn.ang(), self.dim, self.lambda);
        let c = self.centrifugal(big_l);
        let den = 2.0 * nu + dim - 1.0;
        let first = self.q + lam * (-nu * (nu + 0.5) + c);
        let second = self.q + lam * (-(nu + dim - 1.0) * (nu + dim - 1.5) + c);
        -first * second / (2.0 * den * den)
    }

    pub fn wavefunction_params(&self, qn: &QuantumNumbers) -> WavefunctionParams {
        let (nu, big_l, dim, lam) = (qn.nu(), qn.ang(), self.dim, self.lambda);
        let c = self.centrifugal(big_l);
        let rho = 2.0 * big_l + dim - 2.0;
        let sigma = -(self.q + lam * (nu * nu + (dim - 1.0) * nu + 0.25 * (dim - 1.0) + c))
            / (lam * (nu + 0.5 * (dim - 1.0)));
        let tau = -(self.q + lam * (nu * (nu + dim - 1.5) + c)) / (lam * (2.0 * nu + dim - 1.0));
        WavefunctionParams { rho, sigma, tau }
    }

    pub fn wavefunction(&self, qn: &QuantumNumbers, r: f64) -> Result<f64> {
        Ok(self.wavefunction_jet(qn, r)?.v)
    }

    pub(crate) fn wavefunction_jet(&self, qn: &QuantumNumbers, r: f64) -> Result<Jet> {
        self.domain().check_regular(r)?;
        let WavefunctionParams { rho, sigma, tau } = self.wavefunction_params(qn);
        let x = Jet::var(r);
        let t = x * self.lambda + 1.0;
        let poly = jacobi_jet(JacobiParams::new(qn.n_r(), rho, sigma), x * (2.0 * self.lambda) + 1.0);
        Ok(power(x, qn.ang()) * t.powf(tau) * poly)
    }

    pub(crate) fn wavefunction_log_jet(&self, qn: &QuantumNumbers, r: f64) -> Result<Option<LogJet>> {
        self.domain().check_regular(r)?;
        let WavefunctionParams { rho, sigma, tau } = self.wavefunction_params(qn);
        let x = Jet::var(r);
        let t = LogJet::from_jet(x * self.lambda + 1.0);
        let poly = LogJet::from_jet(jacobi_jet(JacobiParams::new(qn.n_r(), rho, sigma), x * (2.0 * self.lambda) + 1.0));
        Ok(match (log_power(x, qn.ang()), t, poly) {
            (Some(p), Some(t), Some(poly)) => Some(p * t.powf(tau) * poly),
            _ => None,
        })
    }

    /// [`Self::wavefunction`] with `g = 1 + lambda R` supplied exactly, for use arbitrarily
    /// close to the `lambda < 0` endpoint where `1 + lambda R` cancels.
    pub(crate) fn wavefunction_with_metric(&self, qn: &QuantumNumbers, r: f64, g: f64) -> f64 {
        let WavefunctionParams { rho, sigma, tau } = self.wavefunction_params(qn);
        let poly = crate::specfun::jacobi(JacobiParams::new(qn.n_r(), rho, sigma), 2.0 * g - 1.0)
            .unwrap_or(f64::NAN);
        power(Jet::constant(r), qn.ang()).v * g.powf(tau) * poly
    }

    /// Normalizability of `(n_r, L)` under the measure `(1 + lambda R)^{-3/2} R^{D-1} dR`.
    pub fn is_admissible(&self, qn: &QuantumNumbers) -> bool {
        let (n, big_l, dim) = (qn.n_r() as f64, qn.ang(), self.dim);
        let common = n * n + (2.0 * big_l + dim - 1.0) * n;
        if self.lambda < 0.0 {
            common + 2.0 * big_l * big_l + (2.0 * dim - 3.0) * big_l + 0.25 * (dim - 1.0)
                < self.q / -self.lambda
        } else {
            common + big_l + 0.25 * (dim - 1.0) * (2.0 * dim - 3.0) < self.q / self.lambda
        }
    }

    /// Coupling above which the ground state `(0, 0)` is bound.
    pub fn existence_threshold(&self) -> f64 {
        if self.lambda < 0.0 {
            0.25 * (self.dim - 1.0) * -self.lambda
        } else {
            0.25 * (self.dim - 1.0) * (2.0 * self.dim - 3.0) * self.lambda
        }
    }

    /// All admissible `(n_r, L)` with integral `L` inside `[0, n_r_max] x [0, l_max]`.
    ///
    /// Fails when any state on the outer rows of the box is admissible, since the
    /// set might then continue beyond it.
    pub fn bound_states_within(&self, n_r_max: u32, l_max: u32) -> Result<Vec<QuantumNumbers>> {
        let boundary_hit = (0..=l_max)
            .map(|l| QuantumNumbers::integral(n_r_max, l))
            .chain((0..=n_r_max).map(|n| QuantumNumbers::integral(n, l_max)))
            .find(|q| self.is_admissible(q));
        if let Some(q) = boundary_hit {
            return Err(Error::SearchBoxTooSmall(format!(
                "state (n_r={}, L={}) on the edge of the {}x{} box is admissible",
                q.n_r(),
                q.ang(),
                n_r_max + 1,
                l_max + 1
            )));
        }
        let mut states: Vec<QuantumNumbers> = (0..=l_max)
            .flat_map(|l| (0..=n_r_max).map(move |n| QuantumNumbers::integral(n, l)))
            .filter(|q| self.is_admissible(q))
            .collect();
        states.sort_by(|a, b| {
            (a.nu(), a.ang()).partial_cmp(&(b.nu(), b.ang())).expect("finite quantum numbers")
        });
        Ok(states)
    }

    /// The full (finite) set of bound states, found by doubling the search box.
    pub fn bound_states(&self) -> Result<Vec<QuantumNumbers>> {
        let mut cap = 4u32;
        loop {
            match self.bound_states_within(cap, cap) {
                Err(Error::SearchBoxTooSmall(_)) if cap < 1 << 20 => cap *= 2,
                other => return other,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qn(n: u32, l: u32) -> QuantumNumbers {
        QuantumNumbers::integral(n, l)
    }

    #[test]
    fn nonlinear_energies() {
        let m = NonlinearOscillator::new(2, -0.1, 1.0).unwrap();
        assert!((m.energy(&qn(1, 0)) - 3.3).abs() < 1e-15);
        let m = NonlinearOscillator::new(2, 0.2, 1.0).unwrap();
        assert!((m.energy(&qn(2, 0)) - 3.0).abs() < 1e-15);
        assert!((m.energy(&qn(0, 4)) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn level_bounds() {
        let n = |lam, beta| NonlinearOscillator::new(2, lam, beta).unwrap().n_max();
        assert_eq!(n(-0.1, 1.0), LevelBound::Unbounded);
        assert_eq!(n(0.2, 1.0), LevelBound::UpTo(4));
        assert_eq!(n(0.25, 1.0), LevelBound::UpTo(3));
        // beta/lambda - 3/2 = 2 exactly: n_max = 2 sits on the closed end.
        assert_eq!(n(0.25, 0.875), LevelBound::UpTo(2));
        assert_eq!(n(2.0, 1.0), LevelBound::NoBoundStates);
        let m = NonlinearOscillator::new(2, 0.2, 1.0).unwrap();
        assert!(m.is_normalizable(&qn(2, 0)));
        assert!(!m.is_normalizable(&qn(0, 5)));
    }

    #[test]
    fn nonlinear_ground_state_is_pure_power() {
        let m = NonlinearOscillator::new(3, 0.3, 1.2).unwrap();
        for r in [0.2, 1.0, 3.0] {
            let expect = (1.0f64 + 0.3 * r * r).powf(-1.2 / 0.6);
            assert!((m.wavefunction(&qn(0, 0), r).unwrap() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn nonlinear_rejects_bad_parameters() {
        assert!(NonlinearOscillator::new(2, 0.0, 1.0).is_err());
        assert!(NonlinearOscillator::new(2, -2.0, 1.0).is_err());
        assert!(NonlinearOscillator::new(1, 0.1, 1.0).is_err());
        let m = NonlinearOscillator::new(2, -0.25, 1.0).unwrap();
        assert!(m.wavefunction(&qn(0, 0), 2.0).is_err());
        assert!(m.wavefunction(&qn(0, 0), 1.99).is_ok());
    }

    #[test]
    fn coulomb_like_energies_break_degeneracy() {
        let m = CoulombLike::new(3.0, -0.1, 1.0).unwrap();
        assert!((m.energy(&qn(0, 0)) + 0.1625).abs() < 1e-15);
        assert!((m.energy(&qn(1, 0)) + 0.062890625).abs() < 1e-15);
        assert!((m.energy(&qn(0, 1)) + 0.046015625).abs() < 1e-15);
    }

    #[test]
    fn coulomb_like_parameters() {
        let m = CoulombLike::new(3.0, -0.1, 1.0).unwrap();
        let p = m.wavefunction_params(&qn(0, 0));
        assert_eq!(p.rho, 1.0);
        assert!((p.sigma - 9.5).abs() < 1e-13);
        assert!((p.tau - 5.0).abs() < 1e-13);
        let p = m.wavefunction_params(&qn(1, 0));
        assert!((p.sigma - 3.25).abs() < 1e-13);
        assert!((p.tau - 1.875).abs() < 1e-13);
    }

    #[test]
    fn bound_state_sets() {
        let pos = CoulombLike::new(3.0, 0.2, 1.0).unwrap().bound_states().unwrap();
        let expect: Vec<_> = [(0, 0), (1, 0), (0, 1), (0, 2), (0, 3)].map(|(n, l)| qn(n, l)).into();
        let mut got = pos.clone();
        got.sort_by(|a, b| (a.ang(), a.n_r()).partial_cmp(&(b.ang(), b.n_r())).unwrap());
        let mut want = expect;
        want.sort_by(|a, b| (a.ang(), a.n_r()).partial_cmp(&(b.ang(), b.n_r())).unwrap());
        assert_eq!(got, want);

        let neg = CoulombLike::new(3.0, -0.1, 1.0).unwrap().bound_states().unwrap();
        assert_eq!(neg.len(), 4);
        for s in [qn(0, 0), qn(1, 0), qn(2, 0), qn(0, 1)] {
            assert!(neg.contains(&s));
        }

        let none = CoulombLike::new(3.0, -1.0, 0.4).unwrap();
        assert!(none.coupling() <= none.existence_threshold());
        assert!(none.bound_states().unwrap().is_empty());
    }

    #[test]
    fn small_search_box_is_an_error() {
        let m = CoulombLike::new(3.0, 0.2, 1.0).unwrap();
        assert!(matches!(m.bound_states_within(1, 2), Err(Error::SearchBoxTooSmall(_))));
        assert_eq!(m.bound_states_within(2, 4).unwrap().len(), 5);
    }
}
