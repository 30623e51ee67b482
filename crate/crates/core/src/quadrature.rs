//! Weighted inner products, normalization and norm-divergence scans.
//!
//! Integrals use composite Gauss-Legendre rules on panels graded geometrically
//! toward the origin and, when the integration reaches a finite curvature
//! endpoint, toward that endpoint as well. Panel sums are reduced pairwise in a
//! fixed order so results do not depend on thread scheduling.

use crate::error::{finite, Error, Result};
use crate::models::{Domain, ModelSpec, RadialState};
use rayon::prelude::*;
use serde::Serialize;

/// Gauss-Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(npoints: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    finite(a, "quadrature bound")?;
    finite(b, "quadrature bound")?;
    if npoints == 0 {
        return Err(Error::InvalidArgument("npoints must be at least 1".into()));
    }
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("need a < b, got [{a}, {b}]")));
    }
    let n = npoints;
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let dp = legendre_with_derivative(n, x).1;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = mid;
    }
    Ok((nodes, weights))
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MeasureKind {
    /// `r^{d-1} dr`.
    EuclideanOscillator { d: f64 },
    /// `(1 + lambda r^2)^{-1/2} r^{d-1} dr`.
    CurvedOscillator { d: f64, lambda: f64 },
    /// `R^{D-1} dR`.
    Coulomb { dim: f64 },
    /// `(1 + lambda R)^{-3/2} R^{D-1} dR`.
    CoulombLike { dim: f64, lambda: f64 },
    /// `dx`, used with the flat-picture (tilde) wavefunctions.
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Measure {
    pub kind: MeasureKind,
    pub domain: Domain,
}

impl Measure {
    /// The measure making `model`'s weighted radial operator self-adjoint.
    pub fn weighted(model: &ModelSpec) -> Self {
        let kind = match model {
            ModelSpec::Oscillator(m) => MeasureKind::EuclideanOscillator { d: m.d() as f64 },
            ModelSpec::Coulomb(m) => MeasureKind::Coulomb { dim: m.dim() },
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => {
                MeasureKind::CurvedOscillator { d: m.d() as f64, lambda: m.lambda() }
            }
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => {
                MeasureKind::CoulombLike { dim: m.dim(), lambda: m.lambda() }
            }
        };
        Self { kind, domain: model.domain() }
    }

    /// Lebesgue measure on `model`'s domain, paired with tilde wavefunctions.
    pub fn flat(model: &ModelSpec) -> Self {
        Self { kind: MeasureKind::Flat, domain: model.domain() }
    }

    pub fn weight(&self, x: f64) -> f64 {
        match self.kind {
            MeasureKind::EuclideanOscillator { d } => x.powf(d - 1.0),
            MeasureKind::CurvedOscillator { d, lambda } => {
                (1.0 + lambda * x * x).powf(-0.5) * x.powf(d - 1.0)
            }
            MeasureKind::Coulomb { dim } => x.powf(dim - 1.0),
            MeasureKind::CoulombLike { dim, lambda } => {
                (1.0 + lambda * x).powf(-1.5) * x.powf(dim - 1.0)
            }
            MeasureKind::Flat => 1.0,
        }
    }

    /// Weight with the metric factor `g` supplied exactly.
    fn weight_with(&self, x: f64, g: f64) -> f64 {
        match self.kind {
            MeasureKind::CurvedOscillator { d, .. } => g.powf(-0.5) * x.powf(d - 1.0),
            MeasureKind::CoulombLike { dim, .. } => g.powf(-1.5) * x.powf(dim - 1.0),
            _ => self.weight(x),
        }
    }

    fn evaluate(&self, state: &RadialState, x: f64, g: f64) -> Result<f64> {
        match self.kind {
            MeasureKind::Flat => state.eval_tilde_with_metric(x, g),
            _ => state.eval_with_metric(x, g),
        }
    }
}

pub const DEFAULT_POINTS: usize = 20;
const MAX_LEVEL: u32 = 7;
const MAX_OCTAVES: usize = 1000;

/// Metric factor `1 + lambda x^2` or `1 + lambda x` of the model, as `(g(x), x(g), |dx/dg|)`.
#[derive(Clone, Copy)]
enum Metric {
    Flat,
    Quadratic(f64),
    Linear(f64),
}

impl Metric {
    fn of(model: &ModelSpec) -> Self {
        match model {
            ModelSpec::Oscillator(_) | ModelSpec::Coulomb(_) => Metric::Flat,
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => Metric::Quadratic(m.lambda()),
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => Metric::Linear(m.lambda()),
        }
    }

    fn g(self, x: f64) -> f64 {
        match self {
            Metric::Flat => 1.0,
            Metric::Quadratic(lam) => 1.0 + lam * x * x,
            Metric::Linear(lam) => 1.0 + lam * x,
        }
    }

    /// Inverse map and Jacobian for `lambda < 0`.
    fn x_of_g(self, g: f64) -> (f64, f64) {
        match self {
            Metric::Flat => (f64::NAN, f64::NAN),
            Metric::Quadratic(lam) => {
                let x = ((1.0 - g) / -lam).sqrt();
                (x, 1.0 / (-2.0 * lam * x))
            }
            Metric::Linear(lam) => ((1.0 - g) / -lam, 1.0 / -lam),
        }
    }
}

fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    fn new(npoints: usize) -> Result<Self> {
        let (nodes, weights) = gauss_legendre(npoints, -1.0, 1.0)?;
        Ok(Self { nodes, weights })
    }

    /// `(integral, integral of |integrand|)` over one panel.
    fn panel<F: Fn(f64) -> Result<f64>>(&self, f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let (mut s, mut abs) = (0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x)? * half * w;
            s += v;
            abs += v.abs();
        }
        Ok((s, abs))
    }
}

/// `(integral, integral of |integrand|)` over the panel layout.
fn integrate<F>(f: &F, layout: &[(f64, f64)], npoints: usize) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let rule = Rule::new(npoints)?;
    let parts: Vec<(f64, f64)> =
        layout.par_iter().map(|&(a, b)| rule.panel(f, a, b)).collect::<Result<_>>()?;
    let sums: Vec<f64> = parts.iter().map(|p| p.0).collect();
    let abss: Vec<f64> = parts.iter().map(|p| p.1).collect();
    Ok((pairwise_sum(&sums), pairwise_sum(&abss)))
}

fn finite_pair(v: Result<(f64, f64)>) -> Option<(f64, f64)> {
    v.ok().filter(|p| p.0.is_finite() && p.1.is_finite())
}

/// `integral_0^top h(v) dv` over octaves `[top 2^-j-1, top 2^-j]` taken in order of
/// increasing `j` until they stop contributing. `h` may blow up like an integrable power
/// at `v = 0`; evaluations that fail or overflow end the sweep once it has settled.
fn octave_leg<H>(h: &H, top: f64, sub: usize, rule: &Rule) -> Result<(f64, f64)>
where
    H: Fn(f64) -> Result<f64> + Sync,
{
    const BATCH: usize = 16;
    let (mut sums, mut abss): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    let settled = |abss: &[f64]| {
        let total = pairwise_sum(abss);
        let n = abss.len();
        n >= 8 && abss[n - 2..].iter().all(|a| *a <= 1e-17 * total)
    };
    while sums.len() < MAX_OCTAVES {
        let start = sums.len();
        let batch: Vec<Option<(f64, f64)>> = (start..start + BATCH)
            .into_par_iter()
            .map(|j| {
                let (hi, lo) = (top * 2f64.powi(-(j as i32)), top * 2f64.powi(-(j as i32) - 1));
                let w = (hi - lo) / sub as f64;
                let mut acc = (0.0, 0.0);
                for i in 0..sub {
                    let a = lo + i as f64 * w;
                    let (s, abs) = finite_pair(rule.panel(h, a, a + w))?;
                    acc = (acc.0 + s, acc.1 + abs);
                }
                Some(acc)
            })
            .collect();
        for (k, part) in batch.into_iter().enumerate() {
            match part {
                Some((s, abs)) => {
                    sums.push(s);
                    abss.push(abs);
                    if settled(&abss) {
                        return Ok((pairwise_sum(&sums), pairwise_sum(&abss)));
                    }
                }
                None => {
                    let total = pairwise_sum(&abss);
                    let last = abss.last().copied().unwrap_or(f64::INFINITY);
                    if start + k >= 8 && last <= 1e-12 * total {
                        return Ok((pairwise_sum(&sums), total));
                    }
                    return Err(Error::Divergent(format!(
                        "integrand is not finite {} octaves into (0, {top}] before its tail settled",
                        start + k
                    )));
                }
            }
        }
    }
    Err(Error::Divergent(format!(
        "{MAX_OCTAVES} octaves into (0, {top}] the integrand still contributes; it is not integrable"
    )))
}

/// Integral of `density(x, g)` over `(0, t]`, `g` the exact metric factor at `x`.
///
/// The head `(0, t/2]` is graded toward the origin. On a finite curvature endpoint the
/// rest is integrated in `g`, graded toward `g = 0`; on an infinite domain it is mapped to
/// `x = t0 / v` and graded toward `v = 0`. Refinement doubles the panels per octave until
/// the result changes by `< 1e-12` relative.
fn integrate_density<F>(density: &F, metric: Metric, domain: &Domain, t: f64, scale: f64, npoints: usize) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let rule = Rule::new(npoints)?;
    let head_top = if t.is_finite() { 0.5 * t } else { scale };
    let head = |x: f64| density(x, metric.g(x));
    let level_value = |level: u32| -> Result<(f64, f64)> {
        let sub = 1usize << level;
        let (mut s, mut abs) = octave_leg(&head, head_top, sub, &rule)?;
        let rest = if t.is_infinite() {
            let tail = |v: f64| {
                let x = head_top / v;
                Ok(density(x, metric.g(x))? * head_top / (v * v))
            };
            octave_leg(&tail, 1.0, sub, &rule)?
        } else if t == domain.hi {
            let top = metric.g(head_top);
            let edge = |g: f64| {
                let (x, jac) = metric.x_of_g(g);
                Ok(density(x, g)? * jac)
            };
            octave_leg(&edge, top, sub, &rule)?
        } else {
            let w = (t - head_top) / (4 * sub) as f64;
            let layout: Vec<(f64, f64)> =
                (0..4 * sub).map(|i| (head_top + i as f64 * w, head_top + (i + 1) as f64 * w)).collect();
            integrate(&head, &layout, npoints)?
        };
        s += rest.0;
        abs += rest.1;
        Ok((s, abs))
    };
    let mut prev = level_value(0)?.0;
    for level in 1..=MAX_LEVEL {
        let (cur, abs) = level_value(level)?;
        if (cur - prev).abs() <= 1e-12 * cur.abs().max(abs) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Divergent(format!(
        "panel refinement on (0, {t}) did not settle; the integrand is not integrable"
    )))
}

/// Radius a few times past the peak of `|f g| dmu`, used to split head from tail.
fn tail_scale(f: &RadialState, g: &RadialState, mu: &Measure) -> f64 {
    let metric = Metric::of(&f.model);
    let density = |x: f64| {
        let gm = metric.g(x);
        match (mu.evaluate(f, x, gm), mu.evaluate(g, x, gm)) {
            (Ok(a), Ok(b)) if (a * b).is_finite() => (a * b * mu.weight_with(x, gm)).abs(),
            _ => 0.0,
        }
    };
    let (mut best, mut arg, mut x) = (0.0, 1.0, 1e-3);
    while x < 1e6 {
        let u = density(x);
        if u > best {
            best = u;
            arg = x;
        }
        x *= 1.05;
    }
    4.0 * arg
}

/// `integral_0^truncation f g dmu`, refined until doubling the panels changes it by `< 1e-12`.
///
/// `truncation` may be the domain end, including `+inf` on the half line.
pub fn inner_product(
    f: &RadialState,
    g: &RadialState,
    mu: &Measure,
    npoints: usize,
    truncation: f64,
) -> Result<f64> {
    if f.model.family() != g.model.family() || f.qn.ang() != g.qn.ang() {
        return Err(Error::InvalidArgument(
            "inner products need states of one model family and angular number".into(),
        ));
    }
    if !(truncation > mu.domain.lo && truncation <= mu.domain.hi) {
        return Err(Error::OutOfDomain { coordinate: truncation, lo: mu.domain.lo, hi: mu.domain.hi });
    }
    let metric = Metric::of(&f.model);
    if truncation == mu.domain.hi && truncation.is_finite() && matches!(metric, Metric::Flat) {
        return Err(Error::InvalidArgument("finite endpoint without a curvature metric".into()));
    }
    let density = |x: f64, gm: f64| Ok(mu.evaluate(f, x, gm)? * mu.evaluate(g, x, gm)? * mu.weight_with(x, gm));
    let scale = if truncation.is_finite() { truncation } else { tail_scale(f, g, mu) };
    integrate_density(&density, metric, &mu.domain, truncation, scale, npoints)
}

/// `sqrt(<state|state>)` over the whole domain.
pub fn norm(state: &RadialState, mu: &Measure) -> Result<f64> {
    Ok(inner_product(state, state, mu, DEFAULT_POINTS, mu.domain.hi)?.sqrt())
}

/// Inner product of the normalized states over the whole domain.
pub fn normalized_inner_product(f: &RadialState, g: &RadialState, mu: &Measure) -> Result<f64> {
    let raw = inner_product(f, g, mu, DEFAULT_POINTS, mu.domain.hi)?;
    Ok(raw / (norm(f, mu)? * norm(g, mu)?))
}

/// Gram matrix of the normalized states.
pub fn gram_matrix(states: &[RadialState], mu: &Measure) -> Result<Vec<Vec<f64>>> {
    let norms: Vec<f64> = states.iter().map(|s| norm(s, mu)).collect::<Result<_>>()?;
    let n = states.len();
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = inner_product(&states[i], &states[j], mu, DEFAULT_POINTS, mu.domain.hi)? / (norms[i] * norms[j]);
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceScan {
    pub verdict: Verdict,
    /// Log-log slope of the norm increments against the growth variable.
    pub slope: f64,
    pub truncations: Vec<f64>,
    /// Cumulative `<f|f>` up to each truncation.
    pub norms: Vec<f64>,
}

/// Decide whether `<f|f>` is finite by watching how the norm grows with the truncation.
///
/// On an infinite domain the growth variable is the truncation `T`; toward a finite
/// endpoint `b` it is `1/(b - T)`. Increments between successive truncations follow a
/// power of that variable, whose fitted exponent decides the verdict (`> 0.05`
/// diverges, `< -0.05` converges, otherwise inconclusive).
pub fn norm_divergence_scan(f: &RadialState, mu: &Measure, truncations: &[f64]) -> Result<DivergenceScan> {
    if truncations.len() < 3 || truncations.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "need at least 3 strictly increasing truncations".into(),
        ));
    }
    let b = mu.domain.hi;
    if truncations[0] <= mu.domain.lo || *truncations.last().expect("nonempty") >= b {
        return Err(Error::InvalidArgument("truncations must lie inside the domain".into()));
    }
    let head = inner_product(f, f, mu, DEFAULT_POINTS, truncations[0])?;
    let metric = Metric::of(&f.model);
    let density = |x: f64| -> Result<f64> {
        let gm = metric.g(x);
        let v = mu.evaluate(f, x, gm)?;
        Ok(v * v * mu.weight_with(x, gm))
    };
    let mut increments = Vec::with_capacity(truncations.len() - 1);
    for w in truncations.windows(2) {
        let (a, c) = (w[0], w[1]);
        // Octave-sized panels in the growth variable keep each increment accurate.
        let layout: Vec<(f64, f64)> = (0..64)
            .map(|i| {
                let t = |k: f64| a + (c - a) * k / 64.0;
                (t(i as f64), t(i as f64 + 1.0))
            })
            .collect();
        increments.push(integrate(&density, &layout, DEFAULT_POINTS)?.0);
    }
    let mut norms = vec![head];
    for inc in &increments {
        norms.push(norms.last().expect("nonempty") + inc);
    }
    let growth = |t: f64| if b.is_finite() { 1.0 / (b - t) } else { t };
    let total = *norms.last().expect("nonempty");
    let points: Vec<(f64, f64)> = increments
        .iter()
        .enumerate()
        .filter(|(_, inc)| **inc > 1e-300 && inc.is_finite())
        .map(|(i, inc)| (growth(truncations[i + 1]).ln(), inc.ln()))
        .collect();
    let negligible = increments.last().is_some_and(|inc| *inc <= 1e-14 * total.abs());
    let slope = if points.len() >= 2 { fit_slope(&points) } else { f64::NEG_INFINITY };
    let verdict = if negligible || slope < -0.05 {
        Verdict::Converges
    } else if slope > 0.05 {
        Verdict::Diverges
    } else {
        Verdict::Inconclusive
    };
    Ok(DivergenceScan { verdict, slope, truncations: truncations.to_vec(), norms })
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Truncation sweep reaching deep into the tail: octaves in `T` on an infinite domain,
/// halvings of the distance to a finite endpoint otherwise.
pub fn default_scan_truncations(model: &ModelSpec) -> Vec<f64> {
    let domain = model.domain();
    if domain.is_finite() {
        let b = domain.hi;
        (4..16).map(|i| b - b * 2f64.powi(-i)).collect()
    } else {
        let lam = model.lambda().abs();
        let base = match model.family() {
            crate::models::Family::Oscillator if lam > 0.0 => 16.0 / lam.sqrt(),
            crate::models::Family::Coulomb if lam > 0.0 => 64.0 / lam,
            _ => 32.0,
        };
        (0..12).map(|i| base * 2f64.powi(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rules() {
        let (x, w) = gauss_legendre(1, 2.0, 5.0).unwrap();
        assert_eq!((x[0], w[0]), (3.5, 3.0));
        let (x, w) = gauss_legendre(2, -1.0, 1.0).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3, 0.0, 1.0).unwrap();
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(5)).sum();
        assert!((v - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn degree_exactness() {
        for n in [4, 7, 20, 33] {
            let (x, w) = gauss_legendre(n, -0.5, 2.0).unwrap();
            for deg in [0, n, 2 * n - 1] {
                let exact = (2f64.powi(deg as i32 + 1) - (-0.5f64).powi(deg as i32 + 1)) / (deg as f64 + 1.0);
                let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!((v - exact).abs() < 1e-13 * exact.abs().max(1.0), "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn rule_errors() {
        assert!(gauss_legendre(0, 0.0, 1.0).is_err());
        assert!(gauss_legendre(3, 0.0, f64::INFINITY).is_err());
        assert!(gauss_legendre(3, 1.0, 1.0).is_err());
    }

    #[test]
    fn octaves_handle_endpoint_powers() {
        let rule = Rule::new(DEFAULT_POINTS).unwrap();
        for (p, exact) in [(-0.5, 2.0), (-0.9, 10.0), (3.0, 0.25)] {
            let h = |v: f64| Ok(v.powf(p));
            let (s, _) = octave_leg(&h, 1.0, 1, &rule).unwrap();
            assert!((s - exact).abs() < 1e-12 * exact, "p={p} s={s}");
        }
        let h = |v: f64| Ok(1.0 / v);
        assert!(matches!(octave_leg(&h, 1.0, 1, &rule), Err(Error::Divergent(_))));
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 1.0 - 2.0 * i as f64)).collect();
        assert!((fit_slope(&pts) + 2.0).abs() < 1e-14);
    }
}
