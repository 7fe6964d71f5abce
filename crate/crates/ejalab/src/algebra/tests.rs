use super::random::{random_element, random_frame, rng_for};
use super::*;

fn realvec(n: usize) -> Algebra {
    Algebra::new(AlgebraSpec::RealVec { n }).unwrap()
}

fn sym(n: usize) -> Algebra {
    Algebra::new(AlgebraSpec::Sym { n }).unwrap()
}

fn diag2(a: f64, b: f64) -> Element {
    Element::from_sym_matrix(&[vec![a, 0.0], vec![0.0, b]], 1e-12).unwrap()
}

#[test]
fn make_algebra_dimensions() {
    assert_eq!(sym(3).rank(), 3);
    assert_eq!(sym(3).dim(), 6);
    let spin4 = Algebra::new(AlgebraSpec::Spin { d: 4 }).unwrap();
    assert_eq!(spin4.rank(), 2);
    assert_eq!(spin4.dim(), 4);
    let prod = Algebra::new(AlgebraSpec::Product {
        factors: vec![AlgebraSpec::RealVec { n: 2 }, AlgebraSpec::Herm { n: 2 }],
    })
    .unwrap();
    assert_eq!(prod.rank(), 4);
    assert_eq!(prod.dim(), 6);
    assert!(Algebra::new(AlgebraSpec::Spin { d: 1 }).is_err());
    assert!(Algebra::new(AlgebraSpec::RealVec { n: 0 }).is_err());
}

#[test]
fn unit_element() {
    assert_eq!(realvec(3).unit().coords(), &[1.0, 1.0, 1.0]);
    let e = sym(2).unit();
    assert_eq!(e.to_sym_matrix().unwrap(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    let spin = Algebra::new(AlgebraSpec::Spin { d: 3 }).unwrap();
    let lam = spin.unit().eigenvalues().unwrap();
    assert!((lam[0] - 1.0).abs() < 1e-14 && (lam[1] - 1.0).abs() < 1e-14);
    // ⟨e,e⟩ = rank and e∘x = x.
    for alg in [realvec(4), sym(3), spin] {
        let e = alg.unit();
        assert!((e.inner(&e).unwrap() - alg.rank() as f64).abs() < 1e-12);
        let x = random_element(&alg, &mut rng_for(1, "unit", 0));
        assert!(e.prod(&x).unwrap().sub(&x).unwrap().norm() < 1e-12);
    }
}

#[test]
fn jordan_product_examples() {
    let rv = realvec(2);
    let x = rv.element(vec![1.0, 2.0]).unwrap();
    let y = rv.element(vec![3.0, 4.0]).unwrap();
    assert_eq!(x.prod(&y).unwrap().coords(), &[3.0, 8.0]);

    // [[0,1],[1,0]]∘[[1,0],[0,−1]] = 0
    let a = Element::from_sym_matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1e-12).unwrap();
    let b = diag2(1.0, -1.0);
    assert!(a.prod(&b).unwrap().norm() < 1e-15);

    // mismatched algebras rejected
    assert!(x.prod(&a).is_err());
    assert!(x.add(&a).is_err());
    assert!(x.inner(&a).is_err());
}

#[test]
fn inner_examples() {
    let d = diag2(1.0, 2.0);
    let off = Element::from_sym_matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1e-12).unwrap();
    assert!(d.inner(&off).unwrap().abs() < 1e-15);

    for alg in [realvec(4), sym(3), Algebra::new(AlgebraSpec::Spin { d: 5 }).unwrap()] {
        let x = random_element(&alg, &mut rng_for(2, "inner", 0));
        let lam = x.eigenvalues().unwrap();
        // ⟨e,x⟩ = tr(x) = Σλ
        assert!((alg.unit().inner(&x).unwrap() - x.trace()).abs() < 1e-10);
        assert!((x.trace() - lam.iter().sum::<f64>()).abs() < 1e-10);
        // isometry: ⟨x,x⟩ = ‖λ(x)‖²
        assert!((x.inner(&x).unwrap() - dot(&lam, &lam)).abs() < 1e-9);
    }
}

#[test]
fn eigenvalue_examples() {
    let x = realvec(3).element(vec![1.0, 3.0, 2.0]).unwrap();
    assert_eq!(x.eigenvalues().unwrap(), vec![3.0, 2.0, 1.0]);

    let off = Element::from_sym_matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1e-12).unwrap();
    let lam = off.eigenvalues().unwrap();
    assert!((lam[0] - 1.0).abs() < 1e-12 && (lam[1] + 1.0).abs() < 1e-12);

    let s = Element::from_spin_natural(&[1.0, 3.0, 4.0]).unwrap();
    let lam = s.eigenvalues().unwrap();
    assert!((lam[0] - 6.0).abs() < 1e-12 && (lam[1] + 4.0).abs() < 1e-12);
}

#[test]
fn product_eigenvalues_merge_sorted() {
    let prod = Algebra::new(AlgebraSpec::Product {
        factors: vec![AlgebraSpec::RealVec { n: 2 }, AlgebraSpec::Sym { n: 2 }],
    })
    .unwrap();
    let x = random_element(&prod, &mut rng_for(3, "prod", 0));
    let lam = x.eigenvalues().unwrap();
    let mut merged = x.coords()[..2].to_vec();
    merged.extend(
        sym(2)
            .element(x.coords()[2..].to_vec())
            .unwrap()
            .eigenvalues()
            .unwrap(),
    );
    merged.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for (a, b) in lam.iter().zip(&merged) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn spectral_decomposition_diagonal() {
    let x = diag2(5.0, 7.0);
    let dec = x.spectral_decomposition().unwrap();
    assert!((dec.lambda[0] - 7.0).abs() < 1e-12 && (dec.lambda[1] - 5.0).abs() < 1e-12);
    // frame is (E22, E11)
    let e22 = dec.frame.idempotents()[0].to_sym_matrix().unwrap();
    assert!((e22[1][1] - 1.0).abs() < 1e-10 && e22[0][0].abs() < 1e-10);
}

#[test]
fn spin_degenerate_uses_first_axis() {
    let x = Element::from_spin_natural(&[2.0, 0.0, 0.0]).unwrap();
    let dec = x.spectral_decomposition().unwrap();
    assert_eq!(dec.lambda, vec![2.0, 2.0]);
    let nat = dec.frame.idempotents()[0].to_spin_natural().unwrap();
    assert!((nat[0] - 0.5).abs() < 1e-14 && (nat[1] - 0.5).abs() < 1e-14 && nat[2].abs() < 1e-14);
    assert!(dec.recompose().unwrap().sub(&x).unwrap().norm() < 1e-12);
}

#[test]
fn decomposition_roundtrip_random() {
    for (i, alg) in [
        realvec(4),
        sym(4),
        Algebra::new(AlgebraSpec::Herm { n: 3 }).unwrap(),
        Algebra::new(AlgebraSpec::Spin { d: 4 }).unwrap(),
        Algebra::new(AlgebraSpec::Product {
            factors: vec![AlgebraSpec::Sym { n: 2 }, AlgebraSpec::Spin { d: 3 }],
        })
        .unwrap(),
    ]
    .iter()
    .enumerate()
    {
        for trial in 0..50 {
            let x = random_element(alg, &mut rng_for(4, "roundtrip", (i * 100 + trial) as u64));
            let dec = x.spectral_decomposition().unwrap();
            let scale = x.norm().max(1.0);
            assert!(dec.recompose().unwrap().sub(&x).unwrap().norm() < 1e-10 * scale);
            assert!(dec.frame.max_violation().unwrap() < 1e-10);
            let lam = x.eigenvalues().unwrap();
            for (a, b) in dec.lambda.iter().zip(&lam) {
                assert!((a - b).abs() < 1e-10 * scale);
            }
        }
    }
}

#[test]
fn recompose_examples() {
    let alg = sym(3);
    let frame = random_frame(&alg, &mut rng_for(5, "recompose", 0)).unwrap();
    // q = 1 → e
    let e = frame.recompose(&[1.0, 1.0, 1.0]).unwrap();
    assert!(e.sub(&alg.unit()).unwrap().norm() < 1e-12);
    // q with k ones → idempotent of rank k
    let p = frame.recompose(&[1.0, 1.0, 0.0]).unwrap();
    assert!(p.prod(&p).unwrap().sub(&p).unwrap().norm() < 1e-12);
    assert!((p.trace() - 2.0).abs() < 1e-12);
    // length mismatch rejected
    assert!(frame.recompose(&[1.0]).is_err());
}

#[test]
fn lmul_matrix_examples() {
    let alg = sym(3);
    let d = alg.dim();
    let id = alg.unit().lmul_matrix();
    for i in 0..d {
        for j in 0..d {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((id[i * d + j] - want).abs() < 1e-14);
        }
    }
    assert!(alg.zero().lmul_matrix().iter().all(|&v| v == 0.0));
    // L_x · coords(y) = coords(x∘y)
    let mut rng = rng_for(6, "lmul", 0);
    let x = random_element(&alg, &mut rng);
    let y = random_element(&alg, &mut rng);
    let lx = x.lmul_matrix();
    let xy = x.prod(&y).unwrap();
    for i in 0..d {
        let row: f64 = (0..d).map(|j| lx[i * d + j] * y.coords()[j]).sum();
        assert!((row - xy.coords()[i]).abs() < 1e-12);
    }
    // symmetry of L_x
    for i in 0..d {
        for j in 0..d {
            assert!((lx[i * d + j] - lx[j * d + i]).abs() < 1e-12);
        }
    }
}

#[test]
fn operator_commute_examples() {
    let rv = realvec(2);
    let a = rv.element(vec![1.0, 0.0]).unwrap();
    let b = rv.element(vec![0.0, 1.0]).unwrap();
    assert!(operator_commute(&a, &b, DEFAULT_TOL).unwrap());

    let d1 = diag2(3.0, -1.0);
    let d2 = diag2(0.5, 2.0);
    assert!(operator_commute(&d1, &d2, DEFAULT_TOL).unwrap());

    let off = Element::from_sym_matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1e-12).unwrap();
    let dg = diag2(1.0, -1.0);
    assert!(!operator_commute(&off, &dg, DEFAULT_TOL).unwrap());
}

#[test]
fn strong_commute_examples() {
    let rv = realvec(2);
    let a = rv.element(vec![1.0, 0.0]).unwrap();
    let b = rv.element(vec![0.0, 1.0]).unwrap();
    let rep = strong_commute(&a, &b, DEFAULT_TOL).unwrap();
    assert!(!rep.strong);
    assert!(rep.operator);
    assert!((rep.inner_gap - 1.0).abs() < 1e-14);

    let rep = strong_commute(&a, &a, DEFAULT_TOL).unwrap();
    assert!(rep.strong && rep.operator);
    assert!(rep.inner_gap.abs() < 1e-14);
    assert!(rep.additivity_gap.abs() < 1e-14);
    assert!(rep.operator_commutator_norm < 1e-14);

    let rep = strong_commute(&diag2(2.0, 1.0), &diag2(5.0, 3.0), DEFAULT_TOL).unwrap();
    assert!(rep.strong);
    assert!(rep.certificate.is_some());
    let cert = rep.certificate.unwrap();
    assert!(cert.max_violation().unwrap() < 1e-8);
}

#[test]
fn strong_commute_shared_frame_certificate() {
    let alg = sym(3);
    for trial in 0..20 {
        let mut rng = rng_for(7, "cert", trial);
        let frame = random_frame(&alg, &mut rng).unwrap();
        let mut qa: Vec<f64> = (0..3).map(|_| random::gauss(&mut rng)).collect();
        let mut qb: Vec<f64> = (0..3).map(|_| random::gauss(&mut rng)).collect();
        qa.sort_by(|a, b| b.partial_cmp(a).unwrap());
        qb.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let a = frame.recompose(&qa).unwrap();
        let b = frame.recompose(&qb).unwrap();
        let rep = strong_commute(&a, &b, DEFAULT_TOL).unwrap();
        assert!(rep.strong, "trial {trial}: gap {}", rep.inner_gap);
        assert!(rep.operator);
        assert!(rep.certificate.is_some(), "trial {trial}");
    }
}

#[test]
fn random_generation_is_deterministic() {
    let alg = Algebra::new(AlgebraSpec::Herm { n: 3 }).unwrap();
    let x1 = random_element(&alg, &mut rng_for(42, "det", 7));
    let x2 = random_element(&alg, &mut rng_for(42, "det", 7));
    assert_eq!(x1.coords(), x2.coords());
    let f1 = random_frame(&alg, &mut rng_for(42, "det", 8)).unwrap();
    let f2 = random_frame(&alg, &mut rng_for(42, "det", 8)).unwrap();
    for (a, b) in f1.idempotents().iter().zip(f2.idempotents()) {
        assert_eq!(a.coords(), b.coords());
    }
    assert!(f1.max_violation().unwrap() < 1e-10);
}

#[test]
fn rejects_non_finite_coords() {
    assert!(Element::new(AlgebraSpec::RealVec { n: 2 }, vec![1.0, f64::NAN]).is_err());
    assert!(Element::new(AlgebraSpec::RealVec { n: 2 }, vec![f64::INFINITY, 0.0]).is_err());
    assert!(Element::new(AlgebraSpec::RealVec { n: 2 }, vec![1.0]).is_err());
}

#[test]
fn frame_constructor_validates() {
    let alg = sym(2);
    let good = random_frame(&alg, &mut rng_for(9, "frameval", 0)).unwrap();
    assert!(OrderedJordanFrame::new(good.idempotents().to_vec(), 1e-8).is_ok());
    // Doubling an idempotent breaks idempotency.
    let bad: Vec<Element> = good.idempotents().iter().map(|e| e.scale(2.0)).collect();
    assert!(OrderedJordanFrame::new(bad, 1e-8).is_err());
}
