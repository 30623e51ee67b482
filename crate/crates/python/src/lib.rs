//! Python bindings: closed-form models, the duality map, the finite-difference oracle
//! and measure-aware quadrature.

use pdmdual_core::duality;
use pdmdual_core::models::{
    CoulombLike, EuclideanCoulomb, EuclideanOscillator, ModelSpec, NonlinearOscillator, PdmOrdering,
    QuantumNumbers, RadialState,
};
use pdmdual_core::oracle::{self, Picture};
use pdmdual_core::quadrature::{self, Measure};
use pdmdual_core::specfun::{self, JacobiParams, LaguerreParams};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: pdmdual_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn state(n_r: u32, ang: f64) -> PyResult<QuantumNumbers> {
    QuantumNumbers::new(n_r, ang).map_err(err)
}

fn picture(ordering: Option<&str>) -> PyResult<Picture> {
    match ordering {
        None => Ok(Picture::Weighted),
        Some(o) => Ok(Picture::PdmFlat(o.parse::<PdmOrdering>().map_err(err)?)),
    }
}

/// A radial model with fixed parameters.
///
///     from pdmdual import Model
///     m = Model.nonlinear_oscillator(d=2, lam=0.2, beta=1.0)
///     m.energy(0, 1)
#[pyclass(frozen, skip_from_py_object, module = "pdmdual")]
#[derive(Clone, Copy)]
struct Model {
    spec: ModelSpec,
}

#[pymethods]
impl Model {
    #[staticmethod]
    fn oscillator(d: u32, omega: f64) -> PyResult<Self> {
        Ok(Self { spec: ModelSpec::Oscillator(EuclideanOscillator::new(d, omega).map_err(err)?) })
    }

    #[staticmethod]
    fn coulomb(dim: f64, q: f64) -> PyResult<Self> {
        Ok(Self { spec: ModelSpec::Coulomb(EuclideanCoulomb::new(dim, q).map_err(err)?) })
    }

    #[staticmethod]
    fn nonlinear_oscillator(d: u32, lam: f64, beta: f64) -> PyResult<Self> {
        Ok(Self { spec: ModelSpec::Nonlinear(NonlinearOscillator::new(d, lam, beta).map_err(err)?) })
    }

    #[staticmethod]
    fn coulomb_like(dim: f64, lam: f64, q: f64) -> PyResult<Self> {
        Ok(Self { spec: ModelSpec::CoulombLike(CoulombLike::new(dim, lam, q).map_err(err)?) })
    }

    #[staticmethod]
    fn pdm_oscillator(d: u32, lam: f64, beta: f64) -> PyResult<Self> {
        Ok(Self { spec: ModelSpec::PdmOscillator(NonlinearOscillator::new(d, lam, beta).map_err(err)?) })
    }

    #[staticmethod]
    fn pdm_coulomb(dim: f64, lam: f64, q: f64) -> PyResult<Self> {
        Ok(Self { spec: ModelSpec::PdmCoulomb(CoulombLike::new(dim, lam, q).map_err(err)?) })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.spec.name()
    }

    /// `(lo, hi)` of the radial coordinate; `hi` is `inf` on the half line.
    #[getter]
    fn domain(&self) -> (f64, f64) {
        let d = self.spec.domain();
        (d.lo, d.hi)
    }

    /// Closed-form energy of `(n_r, ang)` in the weighted picture.
    fn energy(&self, n_r: u32, ang: f64) -> PyResult<f64> {
        Ok(self.spec.energy(&state(n_r, ang)?))
    }

    /// Flat-picture energy of a PDM model for `ordering` (bd, mm or vonroos:xi,eta,zeta).
    fn pdm_energy(&self, ordering: &str, n_r: u32, ang: f64) -> PyResult<f64> {
        let pdm = self.spec.pdm().ok_or_else(|| PyValueError::new_err("not a PDM model"))?;
        let o = ordering.parse::<PdmOrdering>().map_err(err)?;
        Ok(pdm.ordering_energy(o, &state(n_r, ang)?))
    }

    fn is_bound(&self, n_r: u32, ang: f64) -> PyResult<bool> {
        Ok(self.spec.is_bound(&state(n_r, ang)?))
    }

    /// Unnormalized weighted-measure wavefunction at each point of `x`.
    fn wavefunction(&self, n_r: u32, ang: f64, x: Vec<f64>) -> PyResult<Vec<f64>> {
        let s = RadialState::new(self.spec, state(n_r, ang)?);
        x.iter().map(|&r| s.eval(r).map_err(err)).collect()
    }

    /// Unnormalized flat-measure wavefunction at each point of `x`.
    fn wavefunction_tilde(&self, n_r: u32, ang: f64, x: Vec<f64>) -> PyResult<Vec<f64>> {
        let s = RadialState::new(self.spec, state(n_r, ang)?);
        x.iter().map(|&r| s.eval_tilde(r).map_err(err)).collect()
    }

    /// All normalizable `(n_r, L)` of a Coulomb-like model, sorted by `(L, n_r)`.
    fn bound_states(&self) -> PyResult<Vec<(u32, f64)>> {
        match self.spec {
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => {
                let mut v: Vec<(u32, f64)> =
                    m.bound_states().map_err(err)?.iter().map(|q| (q.n_r(), q.ang())).collect();
                v.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
                Ok(v)
            }
            _ => Err(PyValueError::new_err("bound-state enumeration needs a Coulomb-like model")),
        }
    }

    /// `<f|f>^{1/2}` over the whole domain, in the weighted or the flat measure.
    #[pyo3(signature = (n_r, ang, flat=false))]
    fn norm(&self, n_r: u32, ang: f64, flat: bool) -> PyResult<f64> {
        let s = RadialState::new(self.spec, state(n_r, ang)?);
        let mu = if flat { Measure::flat(&self.spec) } else { Measure::weighted(&self.spec) };
        quadrature::norm(&s, &mu).map_err(err)
    }

    /// Gram matrix of the normalized states `n_r in n_rs` at angular number `ang`.
    #[pyo3(signature = (ang, n_rs, flat=false))]
    fn gram_matrix(&self, ang: f64, n_rs: Vec<u32>, flat: bool) -> PyResult<Vec<Vec<f64>>> {
        let states: Vec<RadialState> =
            n_rs.iter().map(|&n| Ok(RadialState::new(self.spec, state(n, ang)?))).collect::<PyResult<_>>()?;
        let mu = if flat { Measure::flat(&self.spec) } else { Measure::weighted(&self.spec) };
        quadrature::gram_matrix(&states, &mu).map_err(err)
    }

    /// Oracle study of the lowest `k` states; `ordering` selects a flat PDM picture.
    #[pyo3(signature = (ang, k=1, grids=vec![512, 1024, 2048], ordering=None))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        ang: f64,
        k: u32,
        grids: Vec<usize>,
        ordering: Option<&str>,
    ) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let reports = oracle::convergence_study(self.spec, picture(ordering)?, ang, k, &grids).map_err(err)?;
        reports
            .iter()
            .map(|r| {
                let d = PyDict::new(py);
                d.set_item("n_r", r.index)?;
                d.set_item("grids", r.grids.clone())?;
                d.set_item("estimates", r.estimates.clone())?;
                d.set_item("extrapolated", r.extrapolated)?;
                d.set_item("reference", r.reference)?;
                d.set_item("relative_error", r.relative_error)?;
                d.set_item("observed_order", r.observed_order)?;
                d.set_item("truncation", r.truncation)?;
                Ok(d)
            })
            .collect()
    }

    /// Largest scaled ODE residual of `(n_r, ang)` at the points `x`.
    #[pyo3(signature = (n_r, ang, x, ordering=None))]
    fn residual(&self, n_r: u32, ang: f64, x: Vec<f64>, ordering: Option<&str>) -> PyResult<f64> {
        let s = RadialState::new(self.spec, state(n_r, ang)?);
        Ok(oracle::residual_norm(&s, picture(ordering)?, &x).map_err(err)?.max_residual)
    }

    fn __repr__(&self) -> String {
        format!("Model({:?})", self.spec)
    }
}

fn pair_dict<'py>(py: Python<'py>, pair: &duality::DualPair) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("D", pair.map.dim)?;
    d.set_item("L", pair.map.big_l)?;
    d.set_item("Q", pair.map.q)?;
    d.set_item("energy", pair.map.energy)?;
    d.set_item("no_integer_preimage", pair.no_integer_preimage)?;
    d.set_item("coulomb", Model { spec: pair.coulomb })?;
    d.set_item("coulomb_n_r", pair.coulomb_qn.n_r())?;
    Ok(d)
}

/// Coulomb dual of a Euclidean oscillator state.
#[pyfunction]
fn map_euclidean<'py>(py: Python<'py>, d: u32, l: u32, omega: f64, n_r: u32) -> PyResult<Bound<'py, PyDict>> {
    pair_dict(py, &duality::map_euclidean(d, l, omega, n_r).map_err(err)?)
}

/// Coulomb-like dual of a curved oscillator state.
#[pyfunction]
fn map_curved<'py>(py: Python<'py>, d: u32, l: u32, lam: f64, beta: f64, n_r: u32) -> PyResult<Bound<'py, PyDict>> {
    pair_dict(py, &duality::map_curved(d, l, lam, beta, n_r).map_err(err)?)
}

/// Largest relative deviation between a Coulomb-side function and its oscillator preimage.
#[pyfunction]
fn duality_deviation(d: u32, l: u32, lam: f64, beta: f64, n_r: u32, samples: Vec<f64>) -> PyResult<f64> {
    let pair = duality::map_curved(d, l, lam, beta, n_r).map_err(err)?;
    Ok(duality::verify_pointwise(&pair, &samples).map_err(err)?.deviation)
}

/// Oscillator `beta` of the dual state with coupling `q`.
#[pyfunction]
fn beta_from_coupling(dim: f64, lam: f64, q: f64, n_r: u32, big_l: f64) -> PyResult<f64> {
    duality::beta_from_coupling(dim, lam, q, n_r, big_l).map_err(err)
}

/// Coulomb-like energy computed through the dual oscillator.
#[pyfunction]
fn energy_via_oscillator(dim: f64, lam: f64, q: f64, n_r: u32, big_l: f64) -> PyResult<f64> {
    let m = CoulombLike::new(dim, lam, q).map_err(err)?;
    duality::energy_via_oscillator(&m, &state(n_r, big_l)?).map_err(err)
}

#[pyfunction]
fn jacobi(n: u32, a: f64, b: f64, x: f64) -> PyResult<f64> {
    specfun::jacobi(JacobiParams::new(n, a, b), x).map_err(err)
}

#[pyfunction]
fn laguerre(n: u32, alpha: f64, x: f64) -> PyResult<f64> {
    specfun::laguerre(LaguerreParams::new(n, alpha), x).map_err(err)
}

/// Gauss-Legendre nodes and weights on `[a, b]`.
#[pyfunction]
fn gauss_legendre(npoints: usize, a: f64, b: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    quadrature::gauss_legendre(npoints, a, b).map_err(err)
}

#[pymodule]
fn pdmdual(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(map_euclidean, m)?)?;
    m.add_function(wrap_pyfunction!(map_curved, m)?)?;
    m.add_function(wrap_pyfunction!(duality_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(beta_from_coupling, m)?)?;
    m.add_function(wrap_pyfunction!(energy_via_oscillator, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi, m)?)?;
    m.add_function(wrap_pyfunction!(laguerre, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_legendre, m)?)?;
    Ok(())
}
