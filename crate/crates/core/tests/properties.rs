//! Property tests over the public API.

use pdmdual_core::duality::{beta_from_coupling, energy_via_oscillator, map_curved, map_euclidean, verify_pointwise};
use pdmdual_core::models::{
    CoulombLike, EuclideanCoulomb, ModelSpec, NonlinearOscillator, PdmOrdering, QuantumNumbers, RadialState,
};
use pdmdual_core::oracle::{build_problem, convergence_study, discretize, lowest_eigenvalues, residual_norm, Picture};
use pdmdual_core::quadrature::{gauss_legendre, inner_product, norm, Measure};
use proptest::prelude::*;

const GRIDS: [usize; 3] = [512, 1024, 2048];

fn qn(n_r: u32, ang: u32) -> QuantumNumbers {
    QuantumNumbers::integral(n_r, ang)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn extrapolated(model: ModelSpec, picture: Picture, ang: u32) -> f64 {
    let reports = convergence_study(model, picture, ang as f64, 1, &GRIDS).unwrap();
    reports[0].extrapolated.unwrap()
}

fn lambda_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![-0.3f64..-0.01, 0.01f64..0.3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_route_energy(dim in 2.0f64..5.0, lambda in lambda_strategy(), q in 0.5f64..3.0, n_r in 0u32..4, big_l in 0u32..4) {
        let model = CoulombLike::new(dim, lambda, q).unwrap();
        let state = qn(n_r, big_l);
        prop_assume!(model.is_admissible(&state));
        let direct = model.energy(&state);
        let via = energy_via_oscillator(&model, &state).unwrap();
        prop_assert!(rel(via, direct) <= 1e-12, "{via} vs {direct}");
    }

    #[test]
    fn coupling_round_trip(half_d in 1u32..4, l in 0u32..4, lambda in lambda_strategy(), beta in 0.5f64..3.0, n_r in 0u32..4) {
        let Ok(pair) = map_curved(2 * half_d, l, lambda, beta, n_r) else {
            return Err(TestCaseError::reject("not normalizable"));
        };
        let back = beta_from_coupling(pair.map.dim, lambda, pair.map.q, n_r, pair.map.big_l).unwrap();
        prop_assert!(rel(back, beta) <= 1e-13, "{back} vs {beta}");
    }

    #[test]
    fn euclidean_exchange(d in 2u32..8, l in 0u32..5, omega in 0.2f64..4.0, n_r in 0u32..5) {
        let pair = map_euclidean(d, l, omega, n_r).unwrap();
        prop_assert!(rel(pair.map.energy, -omega * omega / 8.0) <= 1e-15);
        let n = (2 * n_r + l) as f64;
        prop_assert!(rel(pair.map.q, 0.5 * omega * (n + 0.5 * d as f64)) <= 1e-15);
        prop_assert_eq!(pair.map.dim, 0.5 * (d as f64 + 2.0));
        prop_assert_eq!(pair.no_integer_preimage, l % 2 == 1);
    }

    #[test]
    fn dual_functions_agree(half_d in 1u32..4, half_l in 0u32..3, lambda in lambda_strategy(), beta in 0.5f64..3.0, n_r in 0u32..3) {
        let Ok(pair) = map_curved(2 * half_d, 2 * half_l, lambda, beta, n_r) else {
            return Err(TestCaseError::reject("not normalizable"));
        };
        let domain = pair.coulomb.domain();
        let samples: Vec<f64> = (0..40)
            .map(|j| if domain.is_finite() { domain.hi * (j as f64 + 0.5) / 40.0 } else { 0.25 * (j as f64 + 1.0) })
            .collect();
        let check = verify_pointwise(&pair, &samples).unwrap();
        prop_assert!(check.is_consistent(1e-10), "deviation {}", check.deviation);
    }

    #[test]
    fn closed_forms_solve_their_equations(
        coulomb in any::<bool>(),
        lambda in lambda_strategy(),
        coupling in 0.5f64..3.0,
        n_r in 0u32..3,
        ang in 0u32..3,
    ) {
        let model = if coulomb {
            ModelSpec::CoulombLike(CoulombLike::new(3.0, lambda, coupling).unwrap())
        } else {
            ModelSpec::Nonlinear(NonlinearOscillator::new(3, lambda, coupling).unwrap())
        };
        let state = RadialState::new(model, qn(n_r, ang));
        prop_assume!(model.is_bound(&state.qn));
        let samples = build_problem(model, ang as f64, Picture::Weighted)
            .unwrap()
            .truncated_for_states(n_r + 1)
            .unwrap()
            .interior_samples(50);
        let r = residual_norm(&state, Picture::Weighted, &samples).unwrap();
        prop_assert!(r.max_residual <= 1e-9, "residual {}", r.max_residual);
        prop_assert!(r.used >= 45);
    }

    #[test]
    fn operator_is_an_m_matrix(coulomb in any::<bool>(), lambda in lambda_strategy(), ang in 0u32..3, n in 16usize..400) {
        let model = if coulomb {
            ModelSpec::CoulombLike(CoulombLike::new(3.0, lambda, 1.0).unwrap())
        } else {
            ModelSpec::Nonlinear(NonlinearOscillator::new(3, lambda, 1.0).unwrap())
        };
        prop_assume!(model.is_bound(&qn(0, ang)));
        let problem = build_problem(model, ang as f64, Picture::Weighted).unwrap().truncated_for_states(1).unwrap();
        let op = discretize(&problem, n).unwrap();
        prop_assert_eq!(op.off.len() + 1, op.diag.len());
        prop_assert!(op.off.iter().all(|&v| v < 0.0 && v.is_finite()));
        prop_assert!(op.diag.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn quadrature_weights_are_positive(
        coulomb in any::<bool>(),
        lambda in lambda_strategy(),
        npoints in 2usize..40,
        t in 0.01f64..0.99,
    ) {
        let model = if coulomb {
            ModelSpec::CoulombLike(CoulombLike::new(3.0, lambda, 1.0).unwrap())
        } else {
            ModelSpec::Nonlinear(NonlinearOscillator::new(3, lambda, 1.0).unwrap())
        };
        let domain = model.domain();
        let hi = if domain.is_finite() { t * domain.hi } else { 10.0 * t };
        let (nodes, weights) = gauss_legendre(npoints, 0.0, hi).unwrap();
        let mu = Measure::weighted(&model);
        prop_assert!(weights.iter().all(|&w| w > 0.0));
        prop_assert!(nodes.iter().all(|&x| mu.weight(x) > 0.0));
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials(npoints in 1usize..24, degree in 0u32..47, a in -2.0f64..0.0, b in 0.5f64..2.0) {
        prop_assume!(degree < 2 * npoints as u32);
        let (nodes, weights) = gauss_legendre(npoints, a, b).unwrap();
        let sum: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * x.powi(degree as i32)).sum();
        let k = degree as i32 + 1;
        let exact = (b.powi(k) - a.powi(k)) / k as f64;
        let scale = (b.abs().powi(k) + a.abs().powi(k)) / k as f64;
        prop_assert!((sum - exact).abs() <= 1e-13 * scale, "{sum} vs {exact}");
    }
}

#[test]
fn bound_state_set_matches_predicate() {
    for (dim, lambda, q) in [(3.0, 0.2, 1.0), (3.0, -0.1, 1.0), (2.5, 0.1, 2.0), (4.0, -0.3, 2.5)] {
        let model = CoulombLike::new(dim, lambda, q).unwrap();
        let listed = model.bound_states().unwrap();
        let mut brute = Vec::new();
        for big_l in 0..40 {
            for n_r in 0..40 {
                if model.is_admissible(&qn(n_r, big_l)) {
                    brute.push((big_l, n_r));
                }
            }
        }
        let mut got: Vec<(u32, u32)> = listed.iter().map(|s| (s.ang() as u32, s.n_r())).collect();
        got.sort();
        brute.sort();
        assert_eq!(got, brute, "D = {dim}, lambda = {lambda}, Q = {q}");
    }
}

#[test]
fn euclidean_coulomb_degeneracy() {
    let model = EuclideanCoulomb::new(3.0, 1.0).unwrap();
    for nu in 0..=5u32 {
        let reference = model.energy(&qn(nu, 0));
        for big_l in 1..=nu {
            assert_eq!(model.energy(&qn(nu - big_l, big_l)), reference);
        }
    }
}

#[test]
fn eigenvalues_fall_as_the_box_grows() {
    let models = [
        ModelSpec::Nonlinear(NonlinearOscillator::new(2, 0.2, 1.0).unwrap()),
        ModelSpec::CoulombLike(CoulombLike::new(3.0, 0.2, 1.0).unwrap()),
    ];
    for model in models {
        let base = build_problem(model, 0.0, Picture::Weighted).unwrap().truncated_for_states(2).unwrap();
        let (lo, s_hi) = base.interval();
        let h = (s_hi - lo) / 400.0;
        let mut previous = [f64::INFINITY; 2];
        for factor in [0.4f64, 0.6, 0.8, 1.0, 1.5] {
            let cells = (400.0 * factor).round() as usize;
            let problem = base.clone().with_upper(lo + h * cells as f64).unwrap();
            let ev = lowest_eigenvalues(&discretize(&problem, cells).unwrap(), 2).unwrap();
            for k in 0..2 {
                assert!(ev[k] <= previous[k] + 1e-9, "{} factor {factor}: {} > {}", model.name(), ev[k], previous[k]);
                previous[k] = ev[k];
            }
        }
    }
}

#[test]
fn orderings_share_the_potential() {
    let bd = Picture::PdmFlat(PdmOrdering::BenDanielDuke);
    let mm = Picture::PdmFlat(PdmOrdering::MustafaMazharimousavi);
    let coulomb = CoulombLike::new(3.0, -0.1, 1.0).unwrap();
    let oscillator = NonlinearOscillator::new(3, -0.1, 1.0).unwrap();
    let cases = [
        (ModelSpec::PdmCoulomb(coulomb), 0),
        (ModelSpec::PdmCoulomb(coulomb), 1),
        (ModelSpec::PdmOscillator(oscillator), 1),
    ];
    for (model, ang) in cases {
        let pdm = model.pdm().unwrap();
        let state = qn(0, ang);
        let shift = 2.0 * (pdm.energy(PdmOrdering::MustafaMazharimousavi, &state).unwrap()
            - pdm.energy(PdmOrdering::BenDanielDuke, &state).unwrap());
        let numeric = extrapolated(model, mm, ang) - extrapolated(model, bd, ang);
        assert!((numeric - shift).abs() <= 1e-6, "{}: {numeric} vs {shift}", model.name());
    }
}

#[test]
fn weighted_and_flat_differ_by_a_constant() {
    for (d, lambda) in [(3u32, -0.1), (4, -0.1), (3, 0.2)] {
        let oscillator = NonlinearOscillator::new(d, lambda, 1.0).unwrap();
        let weighted = extrapolated(ModelSpec::Nonlinear(oscillator), Picture::Weighted, 1);
        let flat = extrapolated(ModelSpec::PdmOscillator(oscillator), Picture::PdmFlat(PdmOrdering::BenDanielDuke), 1);
        let shift = (d * (d - 2)) as f64 * lambda / 4.0;
        assert!((weighted - flat - shift).abs() <= 1e-6, "d = {d}: {} vs {shift}", weighted - flat);
    }
}

#[test]
fn von_roos_triples_reproduce_named_orderings() {
    let coulomb = CoulombLike::new(3.0, -0.1, 1.0).unwrap();
    let oscillator = NonlinearOscillator::new(3, -0.1, 1.0).unwrap();
    for model in [ModelSpec::PdmCoulomb(coulomb), ModelSpec::PdmOscillator(oscillator)] {
        let build = |o: PdmOrdering| {
            let p = build_problem(model, 1.0, Picture::PdmFlat(o)).unwrap().truncated_for_states(1).unwrap();
            discretize(&p, 1024).unwrap()
        };
        let bd = build(PdmOrdering::BenDanielDuke);
        let bd_triple = build(PdmOrdering::von_roos(0.0, -1.0, 0.0).unwrap());
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-14 * x.abs());
        assert!(close(&bd.diag, &bd_triple.diag) && close(&bd.off, &bd_triple.off), "{}", model.name());

        let mm = lowest_eigenvalues(&build(PdmOrdering::MustafaMazharimousavi), 2).unwrap();
        let mm_triple = lowest_eigenvalues(&build(PdmOrdering::von_roos(-0.25, -0.5, -0.25).unwrap()), 2).unwrap();
        for (a, b) in mm.iter().zip(&mm_triple) {
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{}: {a} vs {b}", model.name());
        }
    }
}

#[test]
fn frozen_wavefunction_values() {
    // Reference values from 30-digit evaluation of the closed forms.
    let nlo = NonlinearOscillator::new(2, -0.1, 1.0).unwrap();
    let v = nlo.wavefunction(&qn(1, 0), 1.0).unwrap();
    assert!(rel(v, -0.0885735) <= 1e-6, "{v}");
    let clike = CoulombLike::new(3.0, -0.1, 1.0).unwrap();
    let v = clike.wavefunction(&qn(1, 0), 2.0).unwrap();
    assert!(rel(v, 0.493577085262987) <= 1e-13, "{v}");
}

#[test]
fn slow_tail_norm_matches_beta_function() {
    // <f|f> for this state reduces to lambda^{-9} B(9, 1/8).
    let model = ModelSpec::CoulombLike(CoulombLike::new(3.0, 0.2, 1.0).unwrap());
    let state = RadialState::new(model, qn(0, 3));
    let mu = Measure::weighted(&model);
    let n2 = norm(&state, &mu).unwrap().powi(2);
    assert!(rel(n2, 11_249_854.795_879_11) <= 1e-9, "{n2}");
}

#[test]
fn inner_products_are_symmetric() {
    let model = ModelSpec::Nonlinear(NonlinearOscillator::new(3, 0.1, 2.0).unwrap());
    let mu = Measure::weighted(&model);
    let a = RadialState::new(model, qn(0, 1));
    let b = RadialState::new(model, qn(2, 1));
    let ab = inner_product(&a, &b, &mu, 20, 5.0).unwrap();
    let ba = inner_product(&b, &a, &mu, 20, 5.0).unwrap();
    assert!((ab - ba).abs() <= 1e-15 * ab.abs().max(1.0));
}
