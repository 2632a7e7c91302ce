mod common;

use common::random_frame::random_frame;
use common::{affine, heisenberg, point, quadratic, twisted};
use parsym_core::frame::{curvature, derived_curvature, structure_functions};
use parsym_core::invariants::{derivative_flow_error, jacobi_error, reconstruction_error};
use parsym_core::FrameSpec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(spec: &FrameSpec, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            spec.domain()
                .iter()
                .map(|(lo, hi)| rng.random_range(0.8 * lo..0.8 * hi))
                .collect()
        })
        .collect()
}

#[test]
fn structure_reconstructs_brackets() {
    for (spec, seed) in [
        (quadratic(), 1),
        (affine(), 2),
        (heisenberg(), 3),
        (twisted(), 4),
    ] {
        for x in random_points(&spec, 100, seed) {
            let err = reconstruction_error(&spec, &x).unwrap();
            assert!(err < 1e-9, "{:?} at {x:?}: {err:e}", spec.frame_sources());
        }
    }
}

#[test]
fn gamma_is_antisymmetric() {
    let spec = twisted();
    for x in random_points(&spec, 20, 5) {
        let st = structure_functions(&spec, &x, 2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(st.gamma(i, j, k), -st.gamma(j, i, k));
                    assert_eq!(
                        st.gamma_jet(i, j, k).coeffs(),
                        (-st.gamma_jet(j, i, k)).coeffs()
                    );
                }
            }
        }
    }
}

#[test]
fn jacobi_holds_in_three_dimensions() {
    for (spec, seed) in [(heisenberg(), 6), (twisted(), 7)] {
        for x in random_points(&spec, 50, seed) {
            let err = jacobi_error(&spec, &x).unwrap();
            assert!(err < 1e-8, "at {x:?}: {err:e}");
        }
    }
}

#[test]
fn derivatives_match_flow_differences() {
    for (spec, seed) in [(quadratic(), 8), (twisted(), 9)] {
        for x in random_points(&spec, 10, seed) {
            let err = derivative_flow_error(&spec, &x, 2, 1e-4).unwrap();
            assert!(err < 1e-5, "at {x:?}: {err:e}");
        }
    }
}

#[test]
fn closed_form_structure_functions() {
    let a = affine();
    let q = quadratic();
    for x in random_points(&q, 100, 10) {
        let st = structure_functions(&a, &x, 0).unwrap();
        assert!((st.gamma(0, 1, 1) - 1.0).abs() < 1e-10);
        assert!(st.gamma(0, 1, 0).abs() < 1e-10);
        let st = structure_functions(&q, &x, 0).unwrap();
        let expected = 2.0 * x[0] / (1.0 + x[0] * x[0]);
        assert!((st.gamma(0, 1, 1) - expected).abs() < 1e-9);
    }
}

#[test]
fn curvature_sign_and_first_derivative() {
    let k = curvature(&affine(), &[0.4, -1.0]).unwrap();
    assert_eq!(k.curvature_entry(&[], 0, 1, 0), 0.0);
    assert!((k.curvature_entry(&[], 0, 1, 1) + 1.0).abs() < 1e-14);
    assert!((k.curvature_entry(&[], 1, 0, 1) - 1.0).abs() < 1e-14);

    let d = derived_curvature(&quadratic(), &[0.0, 0.0], 1).unwrap();
    assert!((d.curvature_entry(&[0], 0, 1, 1) + 2.0).abs() < 1e-12);
    assert!(d.curvature_entry(&[1], 0, 1, 1).abs() < 1e-14);
    let w1_e1 = d.contract(&[1.0, 0.0]).unwrap();
    assert!((w1_e1.curvature_block(0)[1] + 2.0).abs() < 1e-12);
}

#[test]
fn affine_derivatives_vanish() {
    let spec = affine();
    for x in random_points(&spec, 20, 11) {
        let d = derived_curvature(&spec, &x, 4).unwrap();
        for s in 1..=4 {
            assert!(
                d.curvature_block(s).iter().all(|v| v.abs() < 1e-8),
                "block {s} at {x:?}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(24) })]

    #[test]
    fn random_frames_reconstruct(spec in random_frame(2), x in point(2, 0.9)) {
        prop_assert!(reconstruction_error(&spec, &x).unwrap() < 1e-9);
    }

    #[test]
    fn random_frames_satisfy_jacobi(spec in random_frame(3), x in point(3, 0.9)) {
        let err = jacobi_error(&spec, &x).unwrap();
        prop_assert!(err < 1e-8, "{err:e}");
    }

    #[test]
    fn contraction_is_linear(spec in random_frame(2), x in point(2, 0.9), a in point(2, 2.0), b in point(2, 2.0), t in -2.0..2.0f64) {
        let d = derived_curvature(&spec, &x, 2).unwrap();
        let combo: Vec<f64> = a.iter().zip(&b).map(|(u, v)| u + t * v).collect();
        let lhs = d.contract(&combo).unwrap().flatten();
        let (ca, cb) = (d.contract(&a).unwrap().flatten(), d.contract(&b).unwrap().flatten());
        let scale = d.norm().max(1.0) * 10.0;
        for ((l, u), v) in lhs.iter().zip(&ca).zip(&cb) {
            prop_assert!((l - (u + t * v)).abs() < 1e-12 * scale);
        }
        prop_assert!(d.contract(&[0.0, 0.0]).unwrap().flatten().iter().all(|v| *v == 0.0));
    }
}
