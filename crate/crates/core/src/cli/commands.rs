use super::config::{is_oscillator, model_error, usage, Format, RunConfig};
use super::table::{Cell, Output, Table};
use super::{Failure, EXIT_OK, EXIT_VERIFY};
use crate::duality::verify_pointwise;
use crate::error::Error;
use crate::models::{LevelBound, ModelSpec, PdmOrdering, QuantumNumbers, RadialState};
use crate::oracle::{build_problem, convergence_study, residual_norm, ConvergenceReport, Picture, ResidualReport};
use serde::Serialize;
use serde_json::{Map, Value};

const DEFAULT_N_MAX: u32 = 3;
const DEFAULT_GRIDS: [usize; 3] = [512, 1024, 2048];
const VERIFY_REL_TOL: f64 = 1e-6;
const VERIFY_ORDER_BAND: (f64, f64) = (1.5, 2.5);
const VERIFY_RESIDUAL_TOL: f64 = 1e-9;
const RESIDUAL_SAMPLES: usize = 50;
const DUALITY_TOL: f64 = 1e-10;
const DUALITY_SAMPLES: usize = 40;

pub(crate) fn execute(command: &str, flags: RunConfig) -> Result<Output, Failure> {
    let cfg = flags.merged(command)?;
    match command {
        "spectrum" => spectrum(&cfg),
        "wavefunction" => wavefunction(&cfg),
        "duality" => duality(&cfg),
        "verify" => verify(&cfg),
        "bound-states" => bound_states(&cfg),
        _ => unreachable!("clap only yields known subcommands"),
    }
}

fn lib_error(e: Error) -> Failure {
    match e {
        Error::InvalidModel(_)
        | Error::InvalidQuantumNumbers(_)
        | Error::InvalidArgument(_)
        | Error::Unsupported(_)
        | Error::OutOfDomain { .. }
        | Error::NonFinite(_) => Failure::Usage(e.to_string()),
        _ => Failure::Runtime(e.to_string()),
    }
}

fn config_value(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg).expect("serializable")
}

fn finish(cfg: &RunConfig, command: &str, table: &Table, mut extra: Map<String, Value>) -> Output {
    extra.insert("config".into(), config_value(cfg));
    Output {
        text: Output::render(cfg.format(), command, table, extra),
        out: cfg.out.clone(),
        status: EXIT_OK,
        diagnostics: Vec::new(),
    }
}

/// States ordered by `(ang, n_r)`: every state with `n` (or `nu`) up to `n_max`, or the full
/// normalizable set when `bound_only` is asked for without a cap on a model whose set is finite.
fn enumerate(model: &ModelSpec, n_max: Option<u32>, ang: Option<f64>, bound_only: bool) -> Result<Vec<QuantumNumbers>, Failure> {
    let keep_ang = |q: &QuantumNumbers| ang.is_none_or(|a| q.ang() == a);
    if bound_only && n_max.is_none() {
        let finite_set = match model {
            ModelSpec::Nonlinear(m) | ModelSpec::PdmOscillator(m) => match m.n_max() {
                LevelBound::UpTo(n) => Some(oscillator_states(n, ang)),
                LevelBound::NoBoundStates => Some(Vec::new()),
                LevelBound::Unbounded => None,
            },
            ModelSpec::CoulombLike(m) | ModelSpec::PdmCoulomb(m) => {
                Some(m.bound_states().map_err(lib_error)?.into_iter().filter(keep_ang).collect())
            }
            _ => None,
        };
        let mut states = finite_set.ok_or_else(|| {
            usage(format!("model {} has infinitely many bound states; give --n-max", model.name()))
        })?;
        states.retain(|q| model.is_bound(q));
        sort_states(&mut states);
        return Ok(states);
    }
    let cap = n_max.unwrap_or(DEFAULT_N_MAX);
    let mut states = if is_oscillator(model) {
        oscillator_states(cap, ang)
    } else {
        let angs: Vec<f64> = match ang {
            Some(a) => vec![a],
            None => (0..=cap).map(f64::from).collect(),
        };
        angs.into_iter()
            .filter(|&a| a <= cap as f64)
            .flat_map(|a| {
                let top = (cap as f64 - a + 1e-9).floor() as u32;
                (0..=top).map(move |n_r| QuantumNumbers::new(n_r, a).expect("validated angular number"))
            })
            .collect()
    };
    if bound_only {
        states.retain(|q| model.is_bound(q));
    }
    sort_states(&mut states);
    Ok(states)
}

fn oscillator_states(n_max: u32, ang: Option<f64>) -> Vec<QuantumNumbers> {
    let ls: Vec<u32> = match ang {
        Some(a) => vec![a as u32],
        None => (0..=n_max).collect(),
    };
    ls.into_iter()
        .filter(|&l| l <= n_max)
        .flat_map(|l| (0..=(n_max - l) / 2).map(move |n_r| QuantumNumbers::integral(n_r, l)))
        .collect()
}

fn sort_states(states: &mut [QuantumNumbers]) {
    states.sort_by(|a, b| a.ang().total_cmp(&b.ang()).then(a.n_r().cmp(&b.n_r())));
}

fn principal(model: &ModelSpec, q: &QuantumNumbers) -> Cell {
    let v = if is_oscillator(model) { q.n() } else { q.nu() };
    if v.fract() == 0.0 { Cell::Int(v as i64) } else { Cell::Real(v) }
}

fn ang_cell(q: &QuantumNumbers) -> Cell {
    if q.has_integral_ang() { Cell::Int(q.ang() as i64) } else { Cell::Real(q.ang()) }
}

fn pdm_energy(model: &ModelSpec, ordering: PdmOrdering, q: &QuantumNumbers) -> f64 {
    let pdm = model.pdm().expect("ordering checked against the model");
    match ordering {
        PdmOrdering::VonRoos { .. } => pdm.ordering_energy(ordering, q),
        _ => pdm.energy(ordering, q).expect("closed form for BD and MM"),
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Output, Failure> {
    cfg.check_unused("spectrum", &["n-max", "ordering", "bound-only"])?;
    let model = cfg.model()?;
    let ordering = cfg.ordering(&model)?;
    let states = enumerate(&model, cfg.n_max, cfg.ang()?, cfg.bound_only)?;
    let (ang_name, n_name) = if is_oscillator(&model) { ("l", "n") } else { ("L", "nu") };
    let mut columns = vec!["n_r", ang_name, n_name, "energy", "normalizable"];
    if ordering.is_some() {
        columns.push("energy_pdm");
    }
    let mut table = Table::new(&columns);
    for q in &states {
        let mut row = vec![
            q.n_r().into(),
            ang_cell(q),
            principal(&model, q),
            model.energy(q).into(),
            model.is_bound(q).into(),
        ];
        if let Some(o) = ordering {
            row.push(pdm_energy(&model, o, q).into());
        }
        table.push(row);
    }
    let mut extra = Map::new();
    if let Some(o) = ordering {
        extra.insert("ordering".into(), Value::from(o.to_string()));
    }
    Ok(finish(cfg, "spectrum", &table, extra))
}

fn bound_states(cfg: &RunConfig) -> Result<Output, Failure> {
    cfg.check_unused("bound-states", &["n-max"])?;
    let model = cfg.model()?;
    let states = enumerate(&model, cfg.n_max, cfg.ang()?, true)?;
    let (ang_name, n_name) = if is_oscillator(&model) { ("l", "n") } else { ("L", "nu") };
    let mut table = Table::new(&["n_r", ang_name, n_name, "energy"]);
    for q in &states {
        table.push(vec![q.n_r().into(), ang_cell(q), principal(&model, q), model.energy(q).into()]);
    }
    let mut extra = Map::new();
    extra.insert("count".into(), Value::from(states.len()));
    Ok(finish(cfg, "bound-states", &table, extra))
}

fn wavefunction(cfg: &RunConfig) -> Result<Output, Failure> {
    cfg.check_unused("wavefunction", &["n-r", "x-min", "x-max", "points"])?;
    let model = cfg.model()?;
    let qn = QuantumNumbers::new(cfg.n_r.unwrap_or(0), cfg.ang()?.unwrap_or(0.0)).map_err(model_error)?;
    let state = RadialState::new(model, qn);
    let domain = model.domain();
    let x_min = cfg.x_min.unwrap_or(domain.lo);
    let x_max = cfg.x_max.unwrap_or(if domain.is_finite() { 0.99 * domain.hi } else { 10.0 });
    let points = cfg.points.unwrap_or(101);
    if points < 2 || !(x_min < x_max) {
        return Err(usage(format!("need --points >= 2 and x-min < x-max, got {points} on [{x_min}, {x_max}]")));
    }
    for x in [x_min, x_max] {
        if !(x >= domain.lo && x < domain.hi) {
            return Err(lib_error(Error::OutOfDomain { coordinate: x, lo: domain.lo, hi: domain.hi }));
        }
    }
    let mut table = Table::new(&["x", "psi_weighted", "psi_tilde"]);
    for i in 0..points {
        let x = if i + 1 == points { x_max } else { x_min + (x_max - x_min) * i as f64 / (points - 1) as f64 };
        let psi = state.eval(x).map_err(lib_error)?;
        let tilde = state.eval_tilde(x).map_err(lib_error)?;
        table.push(vec![x.into(), psi.into(), tilde.into()]);
    }
    let mut extra = Map::new();
    extra.insert("energy".into(), Value::from(state.energy()));
    extra.insert("normalizable".into(), Value::from(model.is_bound(&qn)));
    Ok(finish(cfg, "wavefunction", &table, extra))
}

fn duality(cfg: &RunConfig) -> Result<Output, Failure> {
    cfg.check_unused("duality", &["n-r"])?;
    let pair = cfg.dual_pair()?;
    let domain = pair.coulomb.domain();
    let samples: Vec<f64> = (0..DUALITY_SAMPLES)
        .map(|j| {
            if domain.is_finite() {
                domain.hi * (j as f64 + 0.5) / DUALITY_SAMPLES as f64
            } else {
                0.25 * (j as f64 + 1.0)
            }
        })
        .collect();
    let check = verify_pointwise(&pair, &samples).map_err(lib_error)?;
    let coulomb_energy = pair.coulomb.energy(&pair.coulomb_qn);
    let mut table = Table::new(&["D", "L", "Q", "energy", "coulomb_energy", "deviation", "no_integer_preimage"]);
    table.push(vec![
        pair.map.dim.into(),
        pair.map.big_l.into(),
        pair.map.q.into(),
        pair.map.energy.into(),
        coulomb_energy.into(),
        check.deviation.into(),
        pair.no_integer_preimage.into(),
    ]);
    let mut extra = Map::new();
    extra.insert("map".into(), serde_json::to_value(pair.map).expect("serializable"));
    extra.insert("pointwise".into(), serde_json::to_value(&check).expect("serializable"));
    let mut out = finish(cfg, "duality", &table, extra);
    if !check.is_consistent(DUALITY_TOL) {
        out.status = EXIT_VERIFY;
        out.diagnostics.push(format!("pointwise deviation {:e} exceeds {DUALITY_TOL:e}", check.deviation));
    }
    Ok(out)
}

/// Oracle comparison for one state.
#[derive(Debug, Clone, Serialize)]
pub struct StateCheck {
    pub n_r: u32,
    pub ang: f64,
    pub convergence: ConvergenceReport,
    pub residual: ResidualReport,
    pub pass: bool,
}

/// Analytic energies against oracle eigenvalues, convergence orders and residuals.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub model: &'static str,
    pub picture: String,
    pub rel_tol: f64,
    pub order_band: (f64, f64),
    pub residual_tol: f64,
    pub states: Vec<StateCheck>,
    pub pass: bool,
}

fn verify(cfg: &RunConfig) -> Result<Output, Failure> {
    cfg.check_unused("verify", &["k", "ordering", "picture", "grids"])?;
    let model = cfg.model()?;
    let picture = cfg.picture(&model)?;
    let ang = cfg.ang()?.unwrap_or(0.0);
    let k = cfg.k.unwrap_or(1);
    let grids = cfg.grids.clone().unwrap_or(DEFAULT_GRIDS.to_vec());
    let report = spectrum_report(model, picture, ang, k, &grids)?;

    let mut table = Table::new(&[
        "n_r", "ang", "reference", "extrapolated", "relative_error", "observed_order", "residual", "pass",
    ]);
    let mut diagnostics = Vec::new();
    for s in &report.states {
        let c = &s.convergence;
        table.push(vec![
            s.n_r.into(),
            s.ang.into(),
            c.reference.into(),
            c.extrapolated.unwrap_or(f64::NAN).into(),
            c.relative_error.unwrap_or(f64::NAN).into(),
            c.observed_order.unwrap_or(f64::NAN).into(),
            s.residual.max_residual.into(),
            s.pass.into(),
        ]);
        if !s.pass {
            diagnostics.push(format!(
                "n_r = {} failed: relative error {:?} (tol {VERIFY_REL_TOL:e}), order {:?} (band {:?}), residual {:e} (tol {VERIFY_RESIDUAL_TOL:e})",
                s.n_r, c.relative_error, c.observed_order, VERIFY_ORDER_BAND, s.residual.max_residual
            ));
        }
    }
    let status = if report.pass { EXIT_OK } else { EXIT_VERIFY };
    let text = match cfg.format() {
        Format::Csv => table.csv(),
        Format::Json => {
            let mut body = Map::new();
            body.insert("config".into(), config_value(cfg));
            body.insert("report".into(), serde_json::to_value(&report).expect("serializable"));
            Output::json("verify", body)
        }
    };
    Ok(Output { text, out: cfg.out.clone(), status, diagnostics })
}

fn spectrum_report(model: ModelSpec, picture: Picture, ang: f64, k: u32, grids: &[usize]) -> Result<SpectrumReport, Failure> {
    let reports = convergence_study(model, picture, ang, k, grids).map_err(lib_error)?;
    let samples = build_problem(model, ang, picture)
        .and_then(|p| p.truncated_for_states(k))
        .map_err(lib_error)?
        .interior_samples(RESIDUAL_SAMPLES);
    let states = reports
        .into_iter()
        .map(|convergence| {
            let qn = QuantumNumbers::new(convergence.index, ang).map_err(model_error)?;
            let residual = residual_norm(&RadialState::new(model, qn), picture, &samples).map_err(lib_error)?;
            let pass = convergence.passes(VERIFY_REL_TOL, VERIFY_ORDER_BAND) && residual.max_residual <= VERIFY_RESIDUAL_TOL;
            Ok(StateCheck { n_r: convergence.index, ang, convergence, residual, pass })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(SpectrumReport {
        model: model.name(),
        picture: picture.to_string(),
        rel_tol: VERIFY_REL_TOL,
        order_band: VERIFY_ORDER_BAND,
        residual_tol: VERIFY_RESIDUAL_TOL,
        pass: states.iter().all(|s| s.pass),
        states,
    })
}
