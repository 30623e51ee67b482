use super::{CoulombLike, Domain, NonlinearOscillator, QuantumNumbers};
use crate::error::{Error, Result};
use crate::jet::{Jet, LogJet};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Operator ordering of the kinetic term
/// `-(1/2)[m^xi d m^eta d m^zeta + m^zeta d m^eta d m^xi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PdmOrdering {
    /// `(0, -1, 0)`: `-d (1/m) d`.
    BenDanielDuke,
    /// `(-1/4, -1/2, -1/4)`.
    MustafaMazharimousavi,
    VonRoos { xi: f64, eta: f64, zeta: f64 },
}

impl PdmOrdering {
    /// A general triple; must satisfy `xi + eta + zeta = -1`.
    pub fn von_roos(xi: f64, eta: f64, zeta: f64) -> Result<Self> {
        if ![xi, eta, zeta].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("von Roos parameter"));
        }
        let sum = xi + eta + zeta;
        if (sum + 1.0).abs() > 1e-12 {
            return Err(Error::InvalidModel(format!(
                "von Roos parameters must satisfy xi + eta + zeta = -1, got sum {sum}"
            )));
        }
        Ok(PdmOrdering::VonRoos { xi, eta, zeta })
    }

    pub fn triple(&self) -> (f64, f64, f64) {
        match *self {
            PdmOrdering::BenDanielDuke => (0.0, -1.0, 0.0),
            PdmOrdering::MustafaMazharimousavi => (-0.25, -0.5, -0.25),
            PdmOrdering::VonRoos { xi, eta, zeta } => (xi, eta, zeta),
        }
    }

    /// Extra potential `U_K` produced when the kinetic term is rewritten as `-d (1/m) d + U_K`
    /// (doubled-Hamiltonian units).
    pub(crate) fn kinetic_potential(&self, m: Jet) -> f64 {
        let (xi, eta, _) = self.triple();
        let (m0, m1, m2) = (m.v, m.d1, m.d2);
        0.5 * (1.0 + eta) * m2 / (m0 * m0)
            - (xi * xi + xi * eta + xi + eta + 1.0) * m1 * m1 / (m0 * m0 * m0)
    }
}

impl fmt::Display for PdmOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PdmOrdering::BenDanielDuke => write!(f, "bd"),
            PdmOrdering::MustafaMazharimousavi => write!(f, "mm"),
            PdmOrdering::VonRoos { xi, eta, zeta } => write!(f, "vonroos:{xi},{eta},{zeta}"),
        }
    }
}

impl FromStr for PdmOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bd" => Ok(PdmOrdering::BenDanielDuke),
            "mm" => Ok(PdmOrdering::MustafaMazharimousavi),
            _ => {
                let body = s.strip_prefix("vonroos:").ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "unknown ordering {s:?}; expected bd, mm or vonroos:xi,eta,zeta"
                    ))
                })?;
                let parts = body
                    .split(',')
                    .map(|p| p.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::InvalidArgument(format!("bad von Roos triple {body:?}: {e}")))?;
                match parts[..] {
                    [xi, eta, zeta] => PdmOrdering::von_roos(xi, eta, zeta),
                    _ => Err(Error::InvalidArgument(format!(
                        "von Roos ordering needs three numbers, got {}",
                        parts.len()
                    ))),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PdmKind {
    /// `m(r) = (1 + lambda r^2)^{-1}`.
    Oscillator,
    /// `M(R) = (1 + lambda R)^{-2}`.
    Coulomb,
}

impl PdmKind {
    pub fn domain(&self, lambda: f64) -> Domain {
        match (self, lambda < 0.0) {
            (PdmKind::Oscillator, true) => Domain { lo: 0.0, hi: 1.0 / (-lambda).sqrt() },
            (PdmKind::Coulomb, true) => Domain { lo: 0.0, hi: -1.0 / lambda },
            _ => Domain::HALF_LINE,
        }
    }

    pub fn mass(&self, lambda: f64, x: f64) -> Result<f64> {
        self.domain(lambda).check_regular(x)?;
        Ok(self.mass_jet(lambda, Jet::constant(x)).v)
    }

    pub(crate) fn mass_jet(&self, lambda: f64, x: Jet) -> Jet {
        match self {
            PdmKind::Oscillator => (x * x * lambda + 1.0).recip(),
            PdmKind::Coulomb => (x * lambda + 1.0).powi(-2),
        }
    }
}

/// A curved-space model reread as a particle of position-dependent mass in flat space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PdmModel {
    Oscillator(NonlinearOscillator),
    Coulomb(CoulombLike),
}

impl PdmModel {
    pub fn kind(&self) -> PdmKind {
        match self {
            PdmModel::Oscillator(_) => PdmKind::Oscillator,
            PdmModel::Coulomb(_) => PdmKind::Coulomb,
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            PdmModel::Oscillator(m) => m.lambda(),
            PdmModel::Coulomb(m) => m.lambda(),
        }
    }

    pub fn domain(&self) -> Domain {
        self.kind().domain(self.lambda())
    }

    pub fn mass(&self, x: f64) -> Result<f64> {
        self.kind().mass(self.lambda(), x)
    }

    pub(crate) fn mass_jet(&self, x: Jet) -> Jet {
        self.kind().mass_jet(self.lambda(), x)
    }

    /// Closed-form flat-picture potential (centrifugal term included) for BD or MM.
    ///
    /// The Coulomb potential is the same for both orderings.
    pub fn potential(&self, ordering: PdmOrdering, ang: f64, x: f64) -> Result<f64> {
        if let PdmOrdering::VonRoos { .. } = ordering {
            return Err(unsupported_triple());
        }
        self.domain().check_open(x)?;
        Ok(self.potential_with(ordering, ang, x, self.metric_factor(x)))
    }

    /// `1 + lambda r^2` for the oscillator, `1 + lambda R` for the Coulomb problem.
    pub(crate) fn metric_factor(&self, x: f64) -> f64 {
        match self {
            PdmModel::Oscillator(m) => 1.0 + m.lambda() * x * x,
            PdmModel::Coulomb(m) => 1.0 + m.lambda() * x,
        }
    }

    /// [`Self::potential`] with the metric factor `g` supplied by the caller, who may know
    /// it more accurately than `1 + lambda x^2` near a finite endpoint.
    pub(crate) fn potential_with(&self, ordering: PdmOrdering, ang: f64, x: f64, g: f64) -> f64 {
        let lam = self.lambda();
        match self {
            PdmModel::Oscillator(m) => {
                let d = m.d() as f64;
                let cent = (ang + 0.5 * (d - 1.0)) * (ang + 0.5 * (d - 3.0)) / (x * x);
                let beta = m.beta();
                match ordering {
                    PdmOrdering::MustafaMazharimousavi => {
                        let b = beta + 0.5 * lam;
                        cent + (b * b * x * x + 0.25 * lam) / g
                    }
                    _ => cent + (beta * (beta + lam) * x * x - 0.25 * lam) / g,
                }
            }
            PdmModel::Coulomb(m) => {
                let dim = m.dim();
                let cent = (ang + 0.5 * (dim - 1.0)) * (ang + 0.5 * (dim - 3.0)) / (x * x);
                let charge = m.coupling() - 0.25 * (dim - 1.0) * (2.0 * dim - 5.0) * lam;
                cent - charge / x
            }
        }
    }

    /// Flat-picture energy for BD or MM.
    pub fn energy(&self, ordering: PdmOrdering, qn: &QuantumNumbers) -> Result<f64> {
        let lam = self.lambda();
        match (self, ordering) {
            (_, PdmOrdering::VonRoos { .. }) => Err(unsupported_triple()),
            (PdmModel::Oscillator(m), _) => {
                let d = m.d() as f64;
                Ok(m.energy(qn) - d * (d - 2.0) * lam / 8.0)
            }
            (PdmModel::Coulomb(m), PdmOrdering::BenDanielDuke) => {
                let dim = m.dim();
                Ok(m.energy(qn) - (2.0 * dim - 1.0) * (2.0 * dim - 5.0) * lam * lam / 32.0)
            }
            (PdmModel::Coulomb(m), PdmOrdering::MustafaMazharimousavi) => {
                let dim = m.dim();
                Ok(m.energy(qn) - (2.0 * dim - 3.0).powi(2) * lam * lam / 32.0)
            }
        }
    }

    /// Factor taking the weighted-measure wavefunction to the flat-measure one.
    pub fn tilde_transform(&self, x: f64) -> Result<f64> {
        self.domain().check_regular(x)?;
        let xj = Jet::var(x);
        Ok(match self {
            PdmModel::Oscillator(m) => oscillator_tilde_jet(m.d() as f64, m.lambda(), xj).v,
            PdmModel::Coulomb(m) => coulomb_tilde_jet(m.dim(), m.lambda(), xj).v,
        })
    }

    /// Potential paired with an arbitrary ordering in the oracle.
    ///
    /// The oscillator uses `V_1 - U_K`, which is `V_1` for BD and `V_2` for MM; the
    /// Coulomb problem keeps `U` for every ordering and moves `U_K` (a constant for
    /// `M(R)`) into the eigenvalue instead.
    #[cfg(test)]
    pub(crate) fn ordering_potential(&self, ordering: PdmOrdering, ang: f64, x: f64) -> Result<f64> {
        self.domain().check_open(x)?;
        Ok(self.ordering_potential_with(ordering, ang, x, self.metric_factor(x)))
    }

    pub(crate) fn ordering_potential_with(
        &self,
        ordering: PdmOrdering,
        ang: f64,
        x: f64,
        g: f64,
    ) -> f64 {
        let base = self.potential_with(PdmOrdering::BenDanielDuke, ang, x, g);
        match self {
            PdmModel::Oscillator(m) => {
                // m = 1/g: m''/m^2 = -2 lambda + 8 lambda^2 x^2/g, m'^2/m^3 = 4 lambda^2 x^2/g.
                let (xi, eta, _) = ordering.triple();
                let lam = m.lambda();
                let c = xi * xi + xi * eta + xi + eta + 1.0;
                let t = lam * lam * x * x / g;
                let u_k = 0.5 * (1.0 + eta) * (-2.0 * lam + 8.0 * t) - 4.0 * c * t;
                base - u_k
            }
            PdmModel::Coulomb(_) => base,
        }
    }

    /// Flat-picture energy for any ordering; equals [`Self::energy`] for BD and MM.
    ///
    /// The oscillator spectrum does not depend on the ordering once the potential absorbs
    /// `U_K`; for the Coulomb problem `U_K` is a constant that shifts the BD energy.
    pub fn ordering_energy(&self, ordering: PdmOrdering, qn: &QuantumNumbers) -> f64 {
        0.5 * self.ordering_eigenvalue(ordering, qn)
    }

    /// Eigenvalue (`2E` convention) of the oracle problem for `ordering`.
    pub(crate) fn ordering_eigenvalue(&self, ordering: PdmOrdering, qn: &QuantumNumbers) -> f64 {
        let bd = 2.0 * self.energy(PdmOrdering::BenDanielDuke, qn).expect("BD closed form");
        match self {
            PdmModel::Oscillator(_) => bd,
            PdmModel::Coulomb(_) => bd + ordering.kinetic_potential(self.mass_jet(Jet::var(0.0))),
        }
    }
}

fn unsupported_triple() -> Error {
    Error::Unsupported(
        "general von Roos orderings have no closed form; use the numerical oracle".into(),
    )
}

/// Oscillator tilde factor `r^{(d-1)/2} (1 + lambda r^2)^{-1/4}` for real `d`.
///
/// Exposed separately from [`PdmModel`] so that `d = 1` and `lambda = 0` can be evaluated.
pub fn oscillator_tilde_factor(d: f64, lambda: f64, r: f64) -> Result<f64> {
    crate::error::finite(d, "dimension")?;
    crate::error::finite(lambda, "lambda")?;
    let domain = if lambda < 0.0 {
        PdmKind::Oscillator.domain(lambda)
    } else {
        Domain::HALF_LINE
    };
    domain.check_regular(r)?;
    Ok(oscillator_tilde_jet(d, lambda, Jet::var(r)).v)
}

pub(crate) fn oscillator_tilde_jet(d: f64, lambda: f64, r: Jet) -> Jet {
    super::euclidean::power(r, 0.5 * (d - 1.0)) * (r * r * lambda + 1.0).powf(-0.25)
}

pub(crate) fn oscillator_tilde_log_jet(d: f64, lambda: f64, r: Jet) -> Option<LogJet> {
    let g = LogJet::from_jet(r * r * lambda + 1.0)?;
    Some(super::euclidean::log_power(r, 0.5 * (d - 1.0))? * g.powf(-0.25))
}

pub(crate) fn coulomb_tilde_log_jet(dim: f64, lambda: f64, r: Jet) -> Option<LogJet> {
    let g = LogJet::from_jet(r * lambda + 1.0)?;
    Some(super::euclidean::log_power(r, 0.5 * (dim - 1.0))? * g.powf(-0.75))
}

pub(crate) fn coulomb_tilde_jet(dim: f64, lambda: f64, r: Jet) -> Jet {
    super::euclidean::power(r, 0.5 * (dim - 1.0)) * (r * lambda + 1.0).powf(-0.75)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn osc(d: u32, lam: f64, beta: f64) -> PdmModel {
        PdmModel::Oscillator(NonlinearOscillator::new(d, lam, beta).unwrap())
    }

    fn coul(dim: f64, lam: f64, q: f64) -> PdmModel {
        PdmModel::Coulomb(CoulombLike::new(dim, lam, q).unwrap())
    }

    #[test]
    fn masses() {
        assert_eq!(PdmKind::Oscillator.mass(0.3, 0.0).unwrap(), 1.0);
        assert!((PdmKind::Coulomb.mass(-0.1, 5.0).unwrap() - 4.0).abs() < 1e-14);
        assert!((PdmKind::Oscillator.mass(0.2, 2.0).unwrap() - 1.0 / 1.8).abs() < 1e-15);
        assert!(PdmKind::Coulomb.mass(-0.1, 10.0).is_err());
    }

    #[test]
    fn potentials() {
        let bd = PdmOrdering::BenDanielDuke;
        let mm = PdmOrdering::MustafaMazharimousavi;
        let m = osc(2, -0.1, 1.0);
        let diff = m.potential(mm, 0.0, 1.0).unwrap() - m.potential(bd, 0.0, 1.0).unwrap();
        assert!((diff - (0.0025 - 0.05) / 0.9).abs() < 1e-15);
        // D = 5/2 removes the curvature correction to the Coulomb charge.
        let c = coul(2.5, 0.3, 1.7);
        let r = 0.8;
        let cent = (0.75 * -0.25) / (r * r);
        assert!((c.potential(bd, 0.0, r).unwrap() - (cent - 1.7 / r)).abs() < 1e-14);
        assert_eq!(c.potential(bd, 1.0, r).unwrap(), c.potential(mm, 1.0, r).unwrap());
        let vr = PdmOrdering::von_roos(-0.5, 0.0, -0.5).unwrap();
        assert!(matches!(m.potential(vr, 0.0, 1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn energies() {
        let bd = PdmOrdering::BenDanielDuke;
        let mm = PdmOrdering::MustafaMazharimousavi;
        let q = QuantumNumbers::integral(0, 0);
        let m = osc(2, 0.2, 1.0);
        assert_eq!(m.energy(bd, &q).unwrap(), 1.0 * 1.0);
        let m = osc(4, -0.1, 1.0);
        assert!((m.energy(bd, &q).unwrap() - 2.1).abs() < 1e-15);
        assert_eq!(m.energy(bd, &q).unwrap(), m.energy(mm, &q).unwrap());
        let c = coul(3.0, -0.1, 1.0);
        assert!((c.energy(bd, &q).unwrap() + 0.1640625).abs() < 1e-15);
        assert!((c.energy(mm, &q).unwrap() + 0.1653125).abs() < 1e-15);
    }

    #[test]
    fn kinetic_potential_matches_closed_forms() {
        let bd = PdmOrdering::BenDanielDuke;
        let mm = PdmOrdering::MustafaMazharimousavi;
        let m = osc(3, 0.15, 1.3);
        let vr = PdmOrdering::von_roos(0.3, -0.9, -0.4).unwrap();
        for x in [0.3, 1.0, 2.7] {
            let v2 = m.potential(mm, 1.0, x).unwrap();
            assert!((m.ordering_potential(mm, 1.0, x).unwrap() - v2).abs() < 1e-13);
            let u_k = vr.kinetic_potential(m.mass_jet(Jet::var(x)));
            let v1 = m.potential(bd, 1.0, x).unwrap();
            assert!((m.ordering_potential(vr, 1.0, x).unwrap() - (v1 - u_k)).abs() < 1e-13);
            assert_eq!(m.ordering_potential(bd, 1.0, x).unwrap(), m.potential(bd, 1.0, x).unwrap());
        }
        let q = QuantumNumbers::integral(1, 0);
        let c = coul(3.0, -0.1, 1.0);
        let e2 = 2.0 * c.energy(mm, &q).unwrap();
        assert!((c.ordering_eigenvalue(mm, &q) - e2).abs() < 1e-15);
        let e1 = 2.0 * c.energy(bd, &q).unwrap();
        assert_eq!(c.ordering_eigenvalue(bd, &q), e1);
    }

    #[test]
    fn tilde_factors() {
        assert_eq!(oscillator_tilde_factor(1.0, 0.0, 3.7).unwrap(), 1.0);
        let t = osc(3, -0.1, 1.0).tilde_transform(1.0).unwrap();
        assert!((t - 0.9f64.powf(-0.25)).abs() < 1e-15);
        let t = coul(3.0, -0.1, 1.0).tilde_transform(2.0).unwrap();
        assert!((t - 2.0 * 0.8f64.powf(-0.75)).abs() < 1e-15);
    }

    #[test]
    fn ordering_parsing() {
        assert_eq!("bd".parse::<PdmOrdering>().unwrap(), PdmOrdering::BenDanielDuke);
        assert_eq!("mm".parse::<PdmOrdering>().unwrap(), PdmOrdering::MustafaMazharimousavi);
        let v: PdmOrdering = "vonroos:-0.5,0,-0.5".parse().unwrap();
        assert_eq!(v.triple(), (-0.5, 0.0, -0.5));
        assert!("vonroos:0,0,0".parse::<PdmOrdering>().is_err());
        assert!("vonroos:1,2".parse::<PdmOrdering>().is_err());
        assert!("xyz".parse::<PdmOrdering>().is_err());
        assert_eq!(v.to_string().parse::<PdmOrdering>().unwrap(), v);
    }
}
