//! Property-based invariants over arbitrary coordinates.

use ejalab::algebra::{Algebra, AlgebraSpec, Element};
use ejalab::spectral::{ftvn_gap, QRep};
use proptest::prelude::*;

fn coords(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, dim)
}

proptest! {
    #[test]
    fn ftvn_inequality_sym3(a in coords(6), b in coords(6)) {
        let spec = AlgebraSpec::Sym { n: 3 };
        let x = Element::new(spec.clone(), a).unwrap();
        let y = Element::new(spec, b).unwrap();
        let scale = (x.norm() * y.norm()).max(1.0);
        prop_assert!(ftvn_gap(&x, &y).unwrap() >= -1e-9 * scale);
    }

    #[test]
    fn eigenvalue_sum_is_trace_spin(c in coords(4)) {
        let x = Element::new(AlgebraSpec::Spin { d: 4 }, c).unwrap();
        let lam = x.eigenvalues().unwrap();
        let scale = x.norm().max(1.0);
        prop_assert!((lam.iter().sum::<f64>() - x.trace()).abs() <= 1e-10 * scale);
    }

    #[test]
    fn decomposition_roundtrip_herm2(c in coords(4)) {
        let x = Element::new(AlgebraSpec::Herm { n: 2 }, c).unwrap();
        let dec = x.spectral_decomposition().unwrap();
        let back = dec.frame.recompose(&dec.lambda).unwrap();
        prop_assert!(back.sub(&x).unwrap().norm() <= 1e-9 * x.norm().max(1.0));
    }

    #[test]
    fn simplex_projection_is_feasible_and_sorted(lam in coords(4)) {
        let q = QRep::Simplex { level: 1.0 };
        let mut sorted = lam.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let p = q.project(&sorted);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        prop_assert!(p.iter().all(|&v| v >= -1e-12));
        prop_assert!(p.windows(2).all(|w| w[0] >= w[1] - 1e-12));
    }

    #[test]
    fn projection_is_idempotent_nonneg_cone(c in coords(3)) {
        let alg = Algebra::new(AlgebraSpec::RealVec { n: 3 }).unwrap();
        let e = ejalab::spectral::SpectralSet::new(alg.spec().clone(), QRep::NonnegCone).unwrap();
        let x = alg.element(c).unwrap();
        let p = e.project(&x).unwrap();
        let pp = e.project(&p).unwrap();
        prop_assert!(pp.sub(&p).unwrap().norm() <= 1e-12 * p.norm().max(1.0));
    }
}
