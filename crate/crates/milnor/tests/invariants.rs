//! Property-based invariants over randomized inputs.

use nalgebra::DMatrix;
use proptest::prelude::*;

use milnor::curvature::{classify_curvature, CurvatureOptions};
use milnor::forms::{MetricTensor, SignatureMatrix};
use milnor::lie::rhn;
use milnor::reduce::o11_normalize;

proptest! {
    #[test]
    fn o11_normalization_properties(x in -50.0f64..50.0, y in -50.0f64..50.0) {
        prop_assume!(x.abs() + y.abs() > 1e-6);
        let norm = o11_normalize(x, y, 1e-9).unwrap();
        let i11 = SignatureMatrix::new(1, 1).matrix();
        prop_assert!((norm.g.transpose() * &i11 * &norm.g - &i11).amax() <= 1e-9);
        prop_assert!(norm.a > 0.0);
        let row = DMatrix::from_row_slice(1, 2, &[x, y]) * &norm.g;
        let lambda = f64::from(norm.lambda);
        prop_assert!((row[(0, 0)] - norm.a).abs() <= 1e-9 * (x.abs() + y.abs()));
        prop_assert!((row[(0, 1)] - lambda * norm.a).abs() <= 1e-9 * (x.abs() + y.abs()));
    }

    #[test]
    fn signature_invariant_under_congruence(
        entries in proptest::collection::vec(-3.0f64..3.0, 9),
        diag in proptest::collection::vec(prop_oneof![Just(-1.0f64), Just(1.0f64)], 3),
    ) {
        let b = DMatrix::from_row_slice(3, 3, &entries);
        prop_assume!(b.determinant().abs() > 1e-3);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag.clone()));
        let a = MetricTensor::new(0.5 * (b.transpose() * &d * &b + (b.transpose() * &d * &b).transpose())).unwrap();
        let sig = a.signature(1e-9).unwrap();
        let expected_p = diag.iter().filter(|&&e| e > 0.0).count();
        prop_assert_eq!((sig.p, sig.q), (expected_p, 3 - expected_p));
    }

    #[test]
    fn sectional_curvature_scaling_law(s in 0.1f64..10.0) {
        let l = rhn(3).unwrap();
        let g = MetricTensor::canonical(SignatureMatrix::new(2, 1));
        let scaled = MetricTensor::new(s * g.entries()).unwrap();
        let opts = CurvatureOptions::default();
        let base = classify_curvature(&l, &g, &opts).unwrap().flags.constant_k.unwrap();
        let k = classify_curvature(&l, &scaled, &opts).unwrap().flags.constant_k.unwrap();
        prop_assert!((k - base / s).abs() <= 1e-8 * (1.0 + base.abs() / s));
    }
}
