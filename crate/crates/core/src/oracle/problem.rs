use crate::error::{Error, Result};
use crate::jet::{Jet, LogJet};
use crate::models::{Domain, ModelSpec, PdmModel, PdmOrdering, QuantumNumbers, RadialState};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Which form of the radial equation the oracle discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Picture {
    /// Self-adjoint against the curved (or Euclidean radial) measure `w dx`.
    Weighted,
    /// Flat measure `dx` with a position-dependent mass and the given kinetic ordering.
    PdmFlat(PdmOrdering),
}

impl fmt::Display for Picture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Picture::Weighted => write!(f, "weighted"),
            Picture::PdmFlat(o) => write!(f, "flat:{o}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Boundary {
    /// Wavefunction vanishes on the boundary face (mirror ghost node).
    Dirichlet,
    /// Wavefunction vanishes one half cell beyond the last node (the coupling is dropped).
    NodeDirichlet,
    /// Zero flux through the boundary face.
    NaturalFlux,
}

impl Boundary {
    pub(crate) fn face_factor(self) -> f64 {
        match self {
            Boundary::Dirichlet => 2.0,
            Boundary::NodeDirichlet => 1.0,
            Boundary::NaturalFlux => 0.0,
        }
    }
}

/// Map from the uniformly gridded computational variable `s` to the radial coordinate.
///
/// The curved charts use geodesic distance, so the polynomial tails of the
/// `lambda > 0` states become exponential in `s` and the `lambda < 0` Coulomb-like
/// endpoint `R = 1/|lambda|` moves to `s = infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Chart {
    Identity,
    /// `r = sin(k s)/k`, so `1 - k^2 r^2 = cos^2(k s)`.
    Sine { k: f64 },
    /// `r = sinh(k s)/k`, so `1 + k^2 r^2 = cosh^2(k s)`.
    Sinh { k: f64 },
    /// `R = (exp(lambda s) - 1)/lambda`, so `1 + lambda R = exp(lambda s)`.
    Exp { lambda: f64 },
}

impl Chart {
    pub fn x(&self, s: f64) -> f64 {
        match *self {
            Chart::Identity => s,
            Chart::Sine { k } => (k * s).sin() / k,
            Chart::Sinh { k } => (k * s).sinh() / k,
            Chart::Exp { lambda } => (lambda * s).exp_m1() / lambda,
        }
    }

    pub fn s(&self, x: f64) -> f64 {
        match *self {
            Chart::Identity => x,
            Chart::Sine { k } => (k * x).min(1.0).asin() / k,
            Chart::Sinh { k } => (k * x).asinh() / k,
            Chart::Exp { lambda } => (lambda * x).ln_1p() / lambda,
        }
    }

    /// `dx/ds`.
    pub fn jacobian(&self, s: f64) -> f64 {
        match *self {
            Chart::Identity => 1.0,
            Chart::Sine { k } => (k * s).cos(),
            Chart::Sinh { k } => (k * s).cosh(),
            Chart::Exp { lambda } => (lambda * s).exp(),
        }
    }

    /// `1 + lambda x^2` (trigonometric charts) or `1 + lambda x` (exponential chart).
    pub(crate) fn metric(&self, s: f64) -> f64 {
        match *self {
            Chart::Identity => 1.0,
            Chart::Sine { .. } | Chart::Sinh { .. } => self.jacobian(s).powi(2),
            Chart::Exp { .. } => self.jacobian(s),
        }
    }

    /// End of the computational interval for a physical domain, before truncation.
    pub fn s_end(&self, domain: &Domain) -> f64 {
        match *self {
            Chart::Sine { k } => std::f64::consts::FRAC_PI_2 / k,
            Chart::Exp { lambda } if lambda < 0.0 => f64::INFINITY,
            _ => self.s(domain.hi),
        }
    }
}

/// How the kinetic term is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Kinetic {
    /// `-(1/w) d (p w) d`.
    SelfAdjoint,
    /// `-(1/2)[m^xi d m^eta d m^zeta + m^zeta d m^eta d m^xi]` on the flat measure.
    VonRoos { xi: f64, eta: f64, zeta: f64 },
}

pub type Coefficient = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Source {
    Model { model: ModelSpec, ang: f64, picture: Picture },
    Custom { p: Coefficient, w: Coefficient, v: Coefficient },
}

/// A radial eigenproblem `L f = e f` ready for discretization.
#[derive(Clone)]
pub struct SturmLiouvilleProblem {
    source: Source,
    domain: Domain,
    chart: Chart,
    s_lo: f64,
    s_hi: f64,
    pub left: Boundary,
    pub right: Boundary,
}

impl fmt::Debug for SturmLiouvilleProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("SturmLiouvilleProblem");
        match &self.source {
            Source::Model { model, ang, picture } => {
                d.field("model", model).field("ang", ang).field("picture", picture)
            }
            Source::Custom { .. } => d.field("model", &"custom"),
        };
        d.field("domain", &self.domain)
            .field("chart", &self.chart)
            .field("interval", &(self.s_lo, self.s_hi))
            .field("left", &self.left)
            .field("right", &self.right)
            .finish()
    }
}

/// Set up the radial problem of `model` at angular number `ang` in the requested picture.
///
/// The computational interval is the full chart range; problems on an infinite range
/// must be truncated (see [`SturmLiouvilleProblem::truncated_for_states`]) before
/// they can be discretized.
pub fn build_problem(model: ModelSpec, ang: f64, picture: Picture) -> Result<SturmLiouvilleProblem> {
    QuantumNumbers::new(0, ang)?;
    let chart = match model {
        ModelSpec::Oscillator(_) | ModelSpec::Coulomb(_) => Chart::Identity,
        ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => {
            let k = m.lambda().abs().sqrt();
            if m.lambda() < 0.0 {
                Chart::Sine { k }
            } else {
                Chart::Sinh { k }
            }
        }
        ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => Chart::Exp { lambda: m.lambda() },
    };
    let left = match picture {
        Picture::Weighted => Boundary::NaturalFlux,
        Picture::PdmFlat(_) => {
            let pdm = model.pdm().ok_or_else(|| {
                Error::Unsupported(format!(
                    "model {} has no position-dependent-mass picture",
                    model.name()
                ))
            })?;
            let gamma = ang + 0.5 * (flat_dimension(&pdm) - 1.0);
            if gamma > 0.0 && gamma < 1.0 {
                return Err(Error::Unsupported(format!(
                    "flat picture has an attractive centrifugal term {}/x^2 at this angular number; \
                     use the weighted picture",
                    gamma * (gamma - 1.0)
                )));
            }
            Boundary::Dirichlet
        }
    };
    let domain = model.domain();
    Ok(SturmLiouvilleProblem {
        source: Source::Model { model, ang, picture },
        domain,
        chart,
        s_lo: 0.0,
        s_hi: chart.s_end(&domain),
        left,
        right: Boundary::Dirichlet,
    })
}

fn flat_dimension(pdm: &PdmModel) -> f64 {
    match pdm {
        PdmModel::Oscillator(m) => m.d() as f64,
        PdmModel::Coulomb(m) => m.dim(),
    }
}

impl SturmLiouvilleProblem {
    /// `-(1/w)(p w f')' + v f` on `(a, b)` with user coefficients.
    pub fn custom(
        p: Coefficient,
        w: Coefficient,
        v: Coefficient,
        a: f64,
        b: f64,
        left: Boundary,
        right: Boundary,
    ) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!("interval ({a}, {b}) must be finite and nonempty")));
        }
        Ok(Self {
            source: Source::Custom { p, w, v },
            domain: Domain { lo: a, hi: b },
            chart: Chart::Identity,
            s_lo: a,
            s_hi: b,
            left,
            right,
        })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn model(&self) -> Option<ModelSpec> {
        match self.source {
            Source::Model { model, .. } => Some(model),
            Source::Custom { .. } => None,
        }
    }

    pub fn picture(&self) -> Option<Picture> {
        match self.source {
            Source::Model { picture, .. } => Some(picture),
            Source::Custom { .. } => None,
        }
    }

    pub fn ang(&self) -> Option<f64> {
        match self.source {
            Source::Model { ang, .. } => Some(ang),
            Source::Custom { .. } => None,
        }
    }

    pub fn is_custom(&self) -> bool {
        matches!(self.source, Source::Custom { .. })
    }

    /// Computational interval `(s_lo, s_hi)` in chart coordinates.
    pub fn interval(&self) -> (f64, f64) {
        (self.s_lo, self.s_hi)
    }

    /// Physical extent `(x(s_lo), x(s_hi))` of the discretized region.
    pub fn physical_interval(&self) -> (f64, f64) {
        (self.chart.x(self.s_lo), self.chart.x(self.s_hi))
    }

    pub fn kinetic(&self) -> Kinetic {
        match self.source {
            Source::Model { picture: Picture::PdmFlat(PdmOrdering::VonRoos { xi, eta, zeta }), .. } => {
                Kinetic::VonRoos { xi, eta, zeta }
            }
            _ => Kinetic::SelfAdjoint,
        }
    }

    /// Replace the upper end of the computational interval.
    pub fn with_upper(mut self, s_hi: f64) -> Result<Self> {
        if !(s_hi > self.s_lo && s_hi <= self.chart.s_end(&self.domain).max(self.s_hi)) {
            return Err(Error::InvalidArgument(format!(
                "upper end {s_hi} outside the computational range ({}, {}]",
                self.s_lo, self.s_hi
            )));
        }
        self.s_hi = s_hi;
        Ok(self)
    }

    /// Truncate an infinite range where the slowest-decaying of the lowest `k` closed-form
    /// states drops below `1e-12` of its peak. Finite ranges are left alone.
    pub fn truncated_for_states(self, k: u32) -> Result<Self> {
        if self.s_hi.is_finite() {
            return Ok(self);
        }
        let available = self.bound_count();
        if k == 0 || available.is_some_and(|n| k > n) {
            return Err(Error::InvalidArgument(format!(
                "requested {k} states but only {} are bound at this angular number",
                available.unwrap_or(0)
            )));
        }
        let mut s_hi: f64 = 0.0;
        for n_r in 0..k {
            s_hi = s_hi.max(self.tail_cut(n_r)?);
        }
        Ok(Self { s_hi, ..self })
    }

    /// Number of bound states at this angular number (`None` when unlimited).
    pub fn bound_count(&self) -> Option<u32> {
        let Source::Model { model, ang, .. } = self.source else {
            return None;
        };
        match model {
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) if m.lambda() > 0.0 => {
                (0..).take_while(|&n| m.is_normalizable(&qn(n, ang))).last().map(|n| n + 1).or(Some(0))
            }
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => {
                (0..).take_while(|&n| m.is_admissible(&qn(n, ang))).last().map(|n| n + 1).or(Some(0))
            }
            _ => None,
        }
    }

    fn tail_cut(&self, n_r: u32) -> Result<f64> {
        let state = self.target_state(n_r)?;
        let density = |s: f64| -> f64 {
            let x = self.chart.x(s);
            let (_, w) = self.weighted_pw(s);
            match state.eval(x) {
                Ok(psi) if psi.is_finite() && w.is_finite() => w.sqrt() * psi.abs(),
                _ => 0.0,
            }
        };
        let mut peak = 0.0f64;
        let mut last_above = 0.0f64;
        let mut s = 1e-4;
        while s < 1e6 {
            let u = density(s);
            peak = peak.max(u);
            if u >= 1e-12 * peak {
                last_above = s;
            } else if s > 2.0 * last_above && peak > 0.0 {
                break;
            }
            s *= 1.01;
        }
        if !(s < 1e6) {
            return Err(Error::NonNormalizable(format!("state n_r = {n_r} shows no decaying tail")));
        }
        Ok(last_above * 1.01)
    }

    /// The closed-form state with radial number `n_r` at this problem's angular number.
    pub fn target_state(&self, n_r: u32) -> Result<RadialState> {
        let Source::Model { model, ang, .. } = self.source else {
            return Err(Error::Unsupported("custom problems have no closed-form states".into()));
        };
        Ok(RadialState::new(model, qn(n_r, ang)))
    }

    /// Closed-form eigenvalue (`2E` convention) of the `n_r`-th state.
    pub fn reference_eigenvalue(&self, n_r: u32) -> Result<f64> {
        let Source::Model { model, ang, picture } = self.source else {
            return Err(Error::Unsupported("custom problems have no closed-form spectrum".into()));
        };
        let q = qn(n_r, ang);
        match picture {
            Picture::Weighted => Ok(2.0 * model.energy(&q)),
            Picture::PdmFlat(ordering) => {
                let pdm = model.pdm().expect("checked in build_problem");
                match ordering {
                    PdmOrdering::VonRoos { .. } => Ok(pdm.ordering_eigenvalue(ordering, &q)),
                    _ => Ok(2.0 * pdm.energy(ordering, &q)?),
                }
            }
        }
    }

    /// Physical leading coefficient `p(x)` (for von Roos kinetics, `1/m` of the BD rewrite).
    pub fn p(&self, x: f64) -> f64 {
        self.p_jet(x).v
    }

    /// Physical weight `w(x)`.
    pub fn w(&self, x: f64) -> f64 {
        self.w_jet(x).v
    }

    pub(crate) fn p_jet(&self, x: f64) -> Jet {
        let xj = Jet::var(x);
        match &self.source {
            Source::Custom { p, .. } => Jet::constant(p(x)),
            Source::Model { model, picture, .. } => match (picture, model) {
                (Picture::PdmFlat(_), _) => model.pdm().expect("pdm model").mass_jet(xj).recip(),
                (_, ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m)) => xj * xj * m.lambda() + 1.0,
                (_, ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m)) => (xj * m.lambda() + 1.0).powi(2),
                _ => Jet::constant(1.0),
            },
        }
    }

    pub(crate) fn w_jet(&self, x: f64) -> Jet {
        let xj = Jet::var(x);
        match &self.source {
            Source::Custom { w, .. } => Jet::constant(w(x)),
            Source::Model { model, picture, .. } => match (picture, model) {
                (Picture::PdmFlat(PdmOrdering::MustafaMazharimousavi), _) => {
                    model.pdm().expect("pdm model").mass_jet(xj).powf(0.5)
                }
                (Picture::PdmFlat(_), _) => Jet::constant(1.0),
                (_, ModelSpec::Oscillator(m)) => xj.powf(m.d() as f64 - 1.0),
                (_, ModelSpec::Coulomb(m)) => xj.powf(m.dim() - 1.0),
                (_, ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m)) => {
                    (xj * xj * m.lambda() + 1.0).powf(-0.5) * xj.powf(m.d() as f64 - 1.0)
                }
                (_, ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m)) => {
                    (xj * m.lambda() + 1.0).powf(-1.5) * xj.powf(m.dim() - 1.0)
                }
            },
        }
    }

    /// Physical potential `V(x)`, centrifugal term included.
    pub fn potential(&self, x: f64) -> Result<f64> {
        match &self.source {
            Source::Custom { v, .. } => Ok(v(x)),
            Source::Model { .. } => {
                self.domain.check_open(x)?;
                Ok(self.potential_xg(x, self.metric_at_x(x)))
            }
        }
    }

    fn metric_at_x(&self, x: f64) -> f64 {
        match self.chart {
            Chart::Identity => 1.0,
            Chart::Sine { k } => 1.0 - k * k * x * x,
            Chart::Sinh { k } => 1.0 + k * k * x * x,
            Chart::Exp { lambda } => 1.0 + lambda * x,
        }
    }

    fn potential_xg(&self, x: f64, g: f64) -> f64 {
        let Source::Model { model, ang, picture } = self.source else {
            unreachable!("custom potentials are evaluated directly")
        };
        match picture {
            Picture::PdmFlat(ordering) => {
                let pdm = model.pdm().expect("pdm model");
                match ordering {
                    PdmOrdering::VonRoos { .. } => pdm.ordering_potential_with(ordering, ang, x, g),
                    _ => pdm.potential_with(ordering, ang, x, g),
                }
            }
            Picture::Weighted => match model {
                ModelSpec::Oscillator(m) => {
                    let (d, w) = (m.d() as f64, m.omega());
                    ang * (ang + d - 2.0) / (x * x) + w * w * x * x
                }
                ModelSpec::Coulomb(m) => ang * (ang + m.dim() - 2.0) / (x * x) - m.coupling() / x,
                ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => {
                    let d = m.d() as f64;
                    ang * (ang + d - 2.0) / (x * x) + m.alpha_squared() * x * x / g
                }
                ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => {
                    ang * (ang + m.dim() - 2.0) / (x * x) - m.coupling() / x
                }
            },
        }
    }

    /// `(P_s, W_s)` of the weighted picture in chart coordinates.
    fn weighted_pw(&self, s: f64) -> (f64, f64) {
        let Source::Model { model, .. } = self.source else {
            unreachable!("custom problems are not charted")
        };
        let x = self.chart.x(s);
        let w = match model {
            ModelSpec::Oscillator(m) => x.powf(m.d() as f64 - 1.0),
            ModelSpec::Coulomb(m) => x.powf(m.dim() - 1.0),
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => x.powf(m.d() as f64 - 1.0),
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => {
                self.chart.metric(s).powf(-0.5) * x.powf(m.dim() - 1.0)
            }
        };
        (1.0, w)
    }

    /// Sandwich factors `(A, C)` at a node.
    pub(crate) fn node_factors(&self, s: f64) -> (f64, f64) {
        match (&self.source, self.kinetic()) {
            (Source::Custom { w, .. }, _) => {
                let a = w(s).recip().sqrt();
                (a, a)
            }
            (_, Kinetic::VonRoos { xi, zeta, .. }) => {
                let j = self.chart.jacobian(s);
                (j.powf(-2.0 * xi - 0.5), j.powf(-2.0 * zeta - 0.5))
            }
            (_, Kinetic::SelfAdjoint) => {
                let a = self.chart_pw(s).1.recip().sqrt();
                (a, a)
            }
        }
    }

    /// Flux coefficient `B` at a face.
    pub(crate) fn face_flux(&self, s: f64) -> f64 {
        match (&self.source, self.kinetic()) {
            (Source::Custom { p, w, .. }, _) => p(s) * w(s),
            (_, Kinetic::VonRoos { eta, .. }) => self.chart.jacobian(s).powf(-2.0 * eta - 1.0),
            (_, Kinetic::SelfAdjoint) => {
                let (p, w) = self.chart_pw(s);
                p * w
            }
        }
    }

    pub(crate) fn node_potential(&self, s: f64) -> f64 {
        match &self.source {
            Source::Custom { v, .. } => v(s),
            Source::Model { .. } => self.potential_xg(self.chart.x(s), self.chart.metric(s)),
        }
    }

    /// `(P_s, W_s)` for self-adjoint model problems, evaluated analytically in `s`.
    fn chart_pw(&self, s: f64) -> (f64, f64) {
        let Source::Model { picture, .. } = self.source else {
            unreachable!("custom problems handled by the caller")
        };
        match picture {
            Picture::Weighted => self.weighted_pw(s),
            Picture::PdmFlat(PdmOrdering::MustafaMazharimousavi) => (1.0, 1.0),
            Picture::PdmFlat(_) => (1.0, self.chart.jacobian(s)),
        }
    }

    /// The function the problem's eigenvector approximates for the `n_r`-th closed-form state,
    /// as a logarithmic jet in `x`; `None` where it vanishes.
    pub(crate) fn eigenfunction_log_jet(&self, n_r: u32, x: f64) -> Result<Option<LogJet>> {
        let Source::Model { model, picture, .. } = self.source else {
            return Err(Error::Unsupported("custom problems have no closed-form states".into()));
        };
        let state = self.target_state(n_r)?;
        match picture {
            Picture::Weighted => state.log_jet(x),
            Picture::PdmFlat(PdmOrdering::MustafaMazharimousavi) => {
                let m = LogJet::from_jet(model.pdm().expect("pdm model").mass_jet(Jet::var(x)));
                Ok(state.tilde_log_jet(x)?.zip(m).map(|(f, m)| f * m.powf(-0.25)))
            }
            Picture::PdmFlat(_) => state.tilde_log_jet(x),
        }
    }

    /// Points spread uniformly in chart coordinates strictly inside the computational interval.
    pub fn interior_samples(&self, count: usize) -> Vec<f64> {
        let (lo, hi) = (self.s_lo, self.s_hi);
        (0..count)
            .map(|j| self.chart.x(lo + (hi - lo) * (j as f64 + 0.5) / count as f64))
            .collect()
    }
}

fn qn(n_r: u32, ang: f64) -> QuantumNumbers {
    QuantumNumbers::new(n_r, ang).expect("angular number validated in build_problem")
}
