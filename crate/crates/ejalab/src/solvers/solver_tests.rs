use super::*;
use crate::algebra::random::{random_element, rng_for};
use crate::algebra::{Algebra, AlgebraSpec, Element};
use crate::spectral::{orbit_linear_max, PhiKind, QRep, SpectralFunction, SpectralSet};

fn realvec(n: usize) -> Algebra {
    Algebra::new(AlgebraSpec::RealVec { n }).unwrap()
}

fn sym(n: usize) -> Algebra {
    Algebra::new(AlgebraSpec::Sym { n }).unwrap()
}

fn diag_sym(vals: &[f64]) -> Element {
    let n = vals.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { vals[i] } else { 0.0 }).collect())
        .collect();
    Element::from_sym_matrix(&rows, 1e-12).unwrap()
}

fn zero_phi(spec: &AlgebraSpec) -> SpectralFunction {
    SpectralFunction::zero(spec.clone()).unwrap()
}

#[test]
fn linear_max_fan_case() {
    // HermMat(2): orbit of λ=(3,−1), c with λ(c)=(2,1) → value 5.
    let c = Element::from_herm_matrix(
        &[vec![2.0, 0.0], vec![0.0, 1.0]],
        &[vec![0.0, 0.0], vec![0.0, 0.0]],
        1e-12,
    )
    .unwrap();
    let e = SpectralSet::new(
        c.algebra().clone(),
        QRep::FiniteOrbits {
            lambdas: vec![vec![3.0, -1.0]],
        },
    )
    .unwrap();
    let report = solve_linear_spectral_max(&c, &e, &zero_phi(c.algebra())).unwrap();
    assert!((report.value - 5.0).abs() < 1e-10);
    assert!(report.commutation.strong);
    assert!(report.converged);
    assert_eq!(report.mode, SolveMode::ExactReduction);
}

#[test]
fn linear_max_realvec_example() {
    let alg = realvec(2);
    let c = alg.element(vec![3.0, -2.0]).unwrap();
    let e = SpectralSet::new(
        alg.spec().clone(),
        QRep::FiniteOrbits {
            lambdas: vec![vec![1.0, 0.0]],
        },
    )
    .unwrap();
    let report = solve_linear_spectral_max(&c, &e, &zero_phi(alg.spec())).unwrap();
    assert!((report.value - 3.0).abs() < 1e-12);
    assert!(report.optimizer.sub(&alg.element(vec![1.0, 0.0]).unwrap()).unwrap().norm() < 1e-10);
}

#[test]
fn linear_max_matches_orbit_sampling() {
    // Three orbits in SymMat(2), Φ = Sum: the reduction dominates and attains
    // the best sampled value per orbit.
    let alg = sym(2);
    let lambdas = vec![vec![2.0, -1.0], vec![1.5, 1.5], vec![4.0, -3.0]];
    let e = SpectralSet::new(
        alg.spec().clone(),
        QRep::FiniteOrbits {
            lambdas: lambdas.clone(),
        },
    )
    .unwrap();
    let phi = SpectralFunction::builtin(alg.spec().clone(), PhiKind::Sum).unwrap();
    let mut rng = rng_for(7, "linear_max_sampling", 0);
    let c = random_element(&alg, &mut rng);
    let report = solve_linear_spectral_max(&c, &e, &phi).unwrap();
    let mut best = f64::NEG_INFINITY;
    for lam in &lambdas {
        let orbit = Orbit::new(alg.spec().clone(), lam.clone()).unwrap();
        for _ in 0..10_000 {
            let x = orbit.sample(&mut rng).unwrap();
            let v = c.inner(&x).unwrap() + phi.eval(&x).unwrap();
            best = best.max(v);
        }
    }
    assert!(report.value + 1e-9 >= best, "{} < {}", report.value, best);
    assert!((report.value - best).abs() < 1e-6);
}

#[test]
fn linear_max_convex_q_variants() {
    // Convex Q: compare projected-gradient reduction against dense sampling
    // of the set, for Simplex and Box with φ = Sum and TopK.
    let alg = sym(3);
    let mut rng = rng_for(11, "convex_q", 0);
    let c = random_element(&alg, &mut rng);
    let cases: Vec<(QRep, SpectralFunction)> = vec![
        (
            QRep::Simplex { level: 1.0 },
            SpectralFunction::builtin(alg.spec().clone(), PhiKind::Sum).unwrap(),
        ),
        (
            QRep::Box { lo: -1.0, up: 2.0 },
            SpectralFunction::builtin(alg.spec().clone(), PhiKind::TopK { k: 2 }).unwrap(),
        ),
    ];
    for (q_rep, phi) in cases {
        let e = SpectralSet::new(alg.spec().clone(), q_rep).unwrap();
        let report = solve_linear_spectral_max(&c, &e, &phi).unwrap();
        assert!(report.converged);
        assert!(e.contains(&report.optimizer, 1e-6).unwrap());
        let mut best = f64::NEG_INFINITY;
        for _ in 0..5_000 {
            let x = e.sample(&mut rng).unwrap();
            best = best.max(c.inner(&x).unwrap() + phi.eval(&x).unwrap());
        }
        assert!(report.value + 1e-6 >= best, "{} < {}", report.value, best);
        assert!(report.commutation.strong);
    }
}

#[test]
fn linear_min_reflected_fan_case() {
    let c = diag_sym(&[2.0, 1.0]);
    let e = SpectralSet::new(
        c.algebra().clone(),
        QRep::FiniteOrbits {
            lambdas: vec![vec![3.0, -1.0]],
        },
    )
    .unwrap();
    let report = solve_linear_spectral_min(&c, &e, &zero_phi(c.algebra())).unwrap();
    // λ̃(c) = (1,2), ⟨(1,2),(3,−1)⟩ = 1.
    assert!((report.value - 1.0).abs() < 1e-10);
    assert!(report.commutation.strong);
}

#[test]
fn linear_min_constant_for_unit_direction() {
    let alg = sym(3);
    let c = alg.unit();
    let lam = vec![2.0, 0.5, -1.0];
    let e = SpectralSet::new(
        alg.spec().clone(),
        QRep::FiniteOrbits {
            lambdas: vec![lam.clone()],
        },
    )
    .unwrap();
    let phi = SpectralFunction::builtin(alg.spec().clone(), PhiKind::SumSquares).unwrap();
    let report = solve_linear_spectral_min(&c, &e, &phi).unwrap();
    let expected: f64 = lam.iter().sum::<f64>() + phi.eval_q(&lam);
    assert!((report.value - expected).abs() < 1e-10);
}

#[test]
fn linear_min_is_reflected_max() {
    let alg = sym(3);
    let mut rng = rng_for(23, "reflection", 0);
    let c = random_element(&alg, &mut rng);
    let e = SpectralSet::new(
        alg.spec().clone(),
        QRep::FiniteOrbits {
            lambdas: vec![vec![1.0, 0.0, -2.0], vec![3.0, 3.0, 0.0]],
        },
    )
    .unwrap();
    let phi = SpectralFunction::builtin(alg.spec().clone(), PhiKind::Max).unwrap();
    let min = solve_linear_spectral_min(&c, &e, &phi).unwrap();
    let max = solve_linear_spectral_max(&c.neg(), &e, &phi.negated()).unwrap();
    assert!((min.value + max.value).abs() < 1e-12);
}

#[test]
fn convex_min_simplex_quadratic() {
    // Nearest point in the SymMat(2) spectraplex to diag(2,−1) is diag(1,0).
    let center = diag_sym(&[2.0, -1.0]);
    let e = SpectralSet::new(center.algebra().clone(), QRep::Simplex { level: 1.0 }).unwrap();
    let h = ObjectiveSpec::Quadratic {
        center: center.clone(),
        weight: 1.0,
    };
    let report = solve_convex_min(&h, &e, &SolveOptions::default()).unwrap();
    assert!(report.converged);
    let expected = diag_sym(&[1.0, 0.0]);
    assert!(report.optimizer.sub(&expected).unwrap().norm() < 1e-6);
    // −h′(a) = center − a = diag(1,−1).
    let neg_grad = center.sub(&report.optimizer).unwrap();
    assert!(neg_grad.sub(&diag_sym(&[1.0, -1.0])).unwrap().norm() < 1e-6);
    assert!(report.commutation.strong);
    assert_eq!(report.mode, SolveMode::ProjectedGradient);
}

#[test]
fn convex_min_linear_over_ball() {
    let alg = realvec(3);
    let c = alg.element(vec![2.0, -1.0, 2.0]).unwrap();
    let r = 1.5;
    let e = SpectralSet::new(alg.spec().clone(), QRep::Ball { r }).unwrap();
    let report = solve_convex_min(&ObjectiveSpec::Linear { c: c.clone() }, &e, &SolveOptions::default()).unwrap();
    assert!(report.converged);
    let expected = c.scale(-r / c.norm());
    assert!(report.optimizer.sub(&expected).unwrap().norm() < 1e-6);
    assert!(report.commutation.strong);
}

#[test]
fn convex_min_interior_optimum() {
    let alg = sym(2);
    let center = diag_sym(&[0.2, -0.1]);
    let e = SpectralSet::new(alg.spec().clone(), QRep::Ball { r: 5.0 }).unwrap();
    let h = ObjectiveSpec::Quadratic { center: center.clone(), weight: 2.0 };
    let report = solve_convex_min(&h, &e, &SolveOptions::default()).unwrap();
    assert!(report.optimizer.sub(&center).unwrap().norm() < 1e-7);
    assert!(h.gradient(&report.optimizer).unwrap().norm() < 1e-6);
    assert!(report.commutation.strong);
}

#[test]
fn orbit_search_matches_linear_reduction() {
    let alg = sym(3);
    let opts = SolveOptions {
        restarts: 4,
        ..SolveOptions::default()
    };
    for trial in 0..5 {
        let mut rng = rng_for(31, "orbit_vs_reduction", trial);
        let c = random_element(&alg, &mut rng);
        let a = random_element(&alg, &mut rng);
        let orbit = Orbit::of(&a).unwrap();
        let report = maximize_over_orbit(&ObjectiveSpec::Linear { c: c.clone() }, &orbit, &opts).unwrap();
        let (exact, _) = orbit_linear_max(&c, &orbit).unwrap();
        assert!(
            (report.value - exact).abs() < 1e-6 * (1.0 + exact.abs()),
            "trial {trial}: {} vs {}",
            report.value,
            exact
        );
        assert_eq!(report.mode, SolveMode::OrbitSearch);
    }
}

#[test]
fn orbit_search_singleton_unit_multiple() {
    let alg = sym(3);
    let orbit = Orbit::new(alg.spec().clone(), vec![2.0, 2.0, 2.0]).unwrap();
    let h = ObjectiveSpec::Quadratic {
        center: alg.zero(),
        weight: 1.0,
    };
    let report = maximize_over_orbit(&h, &orbit, &SolveOptions::default()).unwrap();
    assert!(report.optimizer.sub(&alg.unit().scale(2.0)).unwrap().norm() < 1e-9);
}

/// The two-point set {(1,0),(0,1)} in ℝ² is a single λ-orbit. The maximizer
/// of h(x,y) = x²/2 − x + x(y² + y) over it operator commutes with h′ but
/// does not strongly commute — the classic strong-failure witness.
#[test]
fn orbit_search_strong_failure_witness() {
    let alg = realvec(2);
    let h = ObjectiveSpec::from_callback(
        &alg,
        |x| {
            let (a, b) = (x.coords()[0], x.coords()[1]);
            0.5 * a * a - a + a * (b * b + b)
        },
        Some(Arc::new(|x: &Element| {
            let (a, b) = (x.coords()[0], x.coords()[1]);
            Element::new(x.algebra().clone(), vec![a - 1.0 + b * b + b, a * (2.0 * b + 1.0)]).unwrap()
        })),
        false,
        0,
    )
    .unwrap();
    let orbit = Orbit::new(alg.spec().clone(), vec![1.0, 0.0]).unwrap();
    let report = maximize_over_orbit(&h, &orbit, &SolveOptions::default()).unwrap();
    assert!(report.value.abs() < 1e-12); // h(0,1) = 0 beats h(1,0) = −1/2
    assert!(report.optimizer.sub(&alg.element(vec![0.0, 1.0]).unwrap()).unwrap().norm() < 1e-12);
    assert!(!report.commutation.strong);
    assert!(report.commutation.operator);
}

#[test]
fn vi_nonneg_cone_hand_instance() {
    let alg = realvec(2);
    let target = alg.element(vec![1.0, -1.0]).unwrap();
    let g = VectorField::new(move |x| x.sub(&target).unwrap(), true, Some(1.0));
    let e = SpectralSet::new(alg.spec().clone(), QRep::NonnegCone).unwrap();
    let report = solve_vi(&g, &e, &SolveOptions::default()).unwrap();
    assert!(report.converged);
    assert!(report.optimizer.sub(&alg.element(vec![1.0, 0.0]).unwrap()).unwrap().norm() < 1e-7);
    assert!(report.commutation.strong);
    assert_eq!(report.mode, SolveMode::ViFixedPoint);
}

#[test]
fn vi_zero_field_trivial() {
    let alg = sym(2);
    let g = VectorField::new(|x| x.scale(0.0), true, None);
    let e = SpectralSet::new(alg.spec().clone(), QRep::Simplex { level: 1.0 }).unwrap();
    let report = solve_vi(&g, &e, &SolveOptions::default()).unwrap();
    assert!(report.converged);
    assert!(report.residual < 1e-10);
    assert!(report.commutation.strong);
}

#[test]
fn vi_affine_monotone_sym3() {
    let alg = sym(3);
    let e = SpectralSet::new(alg.spec().clone(), QRep::NonnegCone).unwrap();
    for trial in 0..20 {
        let mut rng = rng_for(47, "vi_affine", trial);
        let b = random_element(&alg, &mut rng);
        let g = VectorField::new(move |x| x.sub(&b).unwrap(), true, Some(1.0));
        let report = solve_vi(&g, &e, &SolveOptions::default()).unwrap();
        let scale = report.optimizer.norm().max(1.0);
        assert!(report.converged, "trial {trial}");
        assert!(report.residual <= 1e-8 * scale);
        assert!(
            report.commutation.inner_gap <= 1e-6 * report.commutation.scale,
            "trial {trial}: gap {}",
            report.commutation.inner_gap
        );
    }
}

#[test]
fn cone_cp_hand_instance() {
    let alg = realvec(2);
    let target = alg.element(vec![1.0, -1.0]).unwrap();
    let f = VectorField::new(move |x| x.sub(&target).unwrap(), true, Some(1.0));
    let k = SpectralSet::new(alg.spec().clone(), QRep::NonnegCone).unwrap();
    let (report, cert) = solve_cone_cp(&f, &k, &SolveOptions::default()).unwrap();
    assert!(report.optimizer.sub(&alg.element(vec![1.0, 0.0]).unwrap()).unwrap().norm() < 1e-7);
    assert!(cert.a_cone_violation < 1e-7);
    assert!(cert.b_cone_violation < 1e-7);
    assert!(cert.inner_ab < 1e-7);
    assert!(cert.eig_complementarity < 1e-7);
}

#[test]
fn cone_cp_identity_field() {
    let alg = sym(2);
    let f = VectorField::new(|x: &Element| x.clone(), true, Some(1.0));
    let k = SpectralSet::new(alg.spec().clone(), QRep::NonnegCone).unwrap();
    let (report, cert) = solve_cone_cp(&f, &k, &SolveOptions::default()).unwrap();
    assert!(report.optimizer.norm() < 1e-8);
    assert!(cert.inner_ab < 1e-10 && cert.eig_complementarity < 1e-10);
}

#[test]
fn cone_cp_random_affine_sym2() {
    let alg = sym(2);
    let k = SpectralSet::new(alg.spec().clone(), QRep::NonnegCone).unwrap();
    for trial in 0..10 {
        let mut rng = rng_for(53, "cp_affine", trial);
        let b = random_element(&alg, &mut rng);
        let f = VectorField::new(move |x| x.scale(2.0).sub(&b).unwrap(), true, Some(2.0));
        let (report, cert) = solve_cone_cp(&f, &k, &SolveOptions::default()).unwrap();
        assert!(report.converged, "trial {trial}");
        for v in [
            cert.a_cone_violation,
            cert.b_cone_violation,
            cert.inner_ab,
            cert.eig_complementarity,
        ] {
            assert!(v < 1e-6, "trial {trial}: violation {v:.3e}");
        }
    }
}

#[test]
fn cone_cp_rejects_other_variants() {
    let alg = realvec(2);
    let f = VectorField::new(|x: &Element| x.clone(), true, None);
    let k = SpectralSet::new(alg.spec().clone(), QRep::Ball { r: 1.0 }).unwrap();
    assert!(matches!(
        solve_cone_cp(&f, &k, &SolveOptions::default()),
        Err(EjaError::UnsupportedVariant(_))
    ));
}

#[test]
fn fan_examples() {
    // Diagonal sorted-decreasing pair: max is tr(CA) itself.
    let c = diag_sym(&[3.0, 1.0, -2.0]);
    let a = diag_sym(&[2.0, 0.0, -1.0]);
    let expected = 3.0 * 2.0 + 1.0 * 0.0 + (-2.0) * (-1.0);
    assert!((fan_trace_max(&c, &a).unwrap() - expected).abs() < 1e-10);

    let c = diag_sym(&[2.0, 1.0]);
    let a = diag_sym(&[3.0, -1.0]);
    assert!((fan_trace_max(&c, &a).unwrap() - 5.0).abs() < 1e-10);

    let alg = realvec(2);
    let v = alg.element(vec![1.0, 0.0]).unwrap();
    assert!(matches!(
        fan_trace_max(&v, &v),
        Err(EjaError::UnsupportedVariant(_))
    ));
}

#[test]
fn fan_dominates_unitary_samples() {
    let spec = AlgebraSpec::Herm { n: 3 };
    let alg = Algebra::new(spec.clone()).unwrap();
    let mut rng = rng_for(61, "fan_sampling", 0);
    let c = random_element(&alg, &mut rng);
    let a = random_element(&alg, &mut rng);
    let bound = fan_trace_max(&c, &a).unwrap();
    let orbit = Orbit::of(&a).unwrap();
    for _ in 0..2_000 {
        let x = orbit.sample(&mut rng).unwrap();
        assert!(c.inner(&x).unwrap() <= bound + 1e-9);
    }
}

#[test]
fn ky_fan_sums() {
    let c = diag_sym(&[5.0, 2.0, -1.0]);
    assert!((sum_k_largest(&c, 2).unwrap() - 7.0).abs() < 1e-10);
    assert!((sum_k_largest(&c, 3).unwrap() - c.trace()).abs() < 1e-10);
    assert!(matches!(sum_k_largest(&c, 0), Err(EjaError::OutOfRange(0))));
    assert!(matches!(sum_k_largest(&c, 4), Err(EjaError::OutOfRange(4))));
}

#[test]
fn callback_gradient_validation() {
    let alg = sym(2);
    // Wrong gradient must be rejected at registration.
    let bad = ObjectiveSpec::from_callback(
        &alg,
        |x| x.coords().iter().map(|c| c * c).sum::<f64>(),
        Some(Arc::new(|x: &Element| x.scale(5.0))),
        true,
        0,
    );
    assert!(matches!(bad, Err(EjaError::BadGradient(_))));
    // Correct gradient passes, and the finite-difference fallback agrees.
    let good = ObjectiveSpec::from_callback(
        &alg,
        |x| x.coords().iter().map(|c| c * c).sum::<f64>(),
        Some(Arc::new(|x: &Element| x.scale(2.0))),
        true,
        0,
    )
    .unwrap();
    let no_grad = ObjectiveSpec::from_callback(
        &alg,
        |x| x.coords().iter().map(|c| c * c).sum::<f64>(),
        None,
        true,
        0,
    )
    .unwrap();
    let mut rng = rng_for(3, "fd_check", 0);
    let x = random_element(&alg, &mut rng);
    let g1 = good.gradient(&x).unwrap();
    let g2 = no_grad.gradient(&x).unwrap();
    assert!(g1.sub(&g2).unwrap().norm() < 1e-6 * g1.norm().max(1.0));
}

#[test]
fn solve_options_json_defaults() {
    let opts: SolveOptions = serde_json::from_str("{}").unwrap();
    assert_eq!(opts.max_iter, 10_000);
    assert_eq!(opts.restarts, 8);
    assert_eq!(opts.seed, 42);
    assert!(opts.tau.is_none());
    let opts: SolveOptions =
        serde_json::from_str(r#"{"max_iter":500,"tol":1e-6,"tau":0.25}"#).unwrap();
    assert_eq!(opts.max_iter, 500);
    assert_eq!(opts.tau, Some(0.25));
}
