//! Randomised invariants of the public API.

mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use srgcert::cpl::{cpl_current, cpl_disk, cpl_srg_sample, CplParams};
use srgcert::criteria::{certify_linear, certify_with_cpl, CertifyOptions};
use srgcert::grid::{
    kron_reduce, rl_grid_model, rotate_admittance, scr_value, Branch, Element, NetworkCase, RlGridParams, Shunt,
};
use srgcert::lti::{invert_at, ComplexMatrix, Constant, FrequencyGrid, SampledResponse, TransferMatrixModel};
use srgcert::srg::{boundary_hausdorff, region_distance, srg_of_matrix_with, SrgOptions, SrgRegion};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn fro(m: &ComplexMatrix) -> f64 {
    m.inner().norm()
}

fn srg(m: &ComplexMatrix) -> SrgRegion {
    srg_of_matrix_with(m, &SrgOptions::default()).unwrap()
}

fn unitary(r: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let q = complex_matrix(r, n).into_inner().qr().q();
    ComplexMatrix::new(q).unwrap()
}

fn well_conditioned(r: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    loop {
        let m = complex_matrix(r, n);
        if m.condition_number() < 50.0 {
            return m;
        }
    }
}

fn grid() -> FrequencyGrid {
    FrequencyGrid::from_omegas(vec![1.0, 10.0, 100.0]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn real_models_are_conjugate_symmetric(seed in any::<u64>(), w in 0.01f64..100.0) {
        let mut r = rng(seed);
        let model = TransferMatrixModel::StateSpace(stable_mimo(&mut r, 3, 0.0, 1.0));
        let pos = model.evaluate_s(c(0.0, w)).unwrap();
        let neg = model.evaluate_s(c(0.0, -w)).unwrap();
        prop_assert!(pos.conj().max_abs_diff(&neg) <= 1e-12 * (1.0 + fro(&pos)));
    }

    #[test]
    fn state_space_matches_dense_solve(seed in any::<u64>(), w in 0.0f64..100.0) {
        let mut r = rng(seed);
        let ss = stable_mimo(&mut r, 4, 0.5, 1.0);
        let want = ComplexMatrix::new(eval_state_space(&ss, w)).unwrap();
        let got = TransferMatrixModel::StateSpace(ss).evaluate(w).unwrap();
        prop_assert!(got.max_abs_diff(&want) <= 1e-10 * (1.0 + fro(&want)));
    }

    #[test]
    fn double_inversion_is_identity(seed in any::<u64>(), n in 1usize..5) {
        let g = well_conditioned(&mut rng(seed), n);
        let back = invert_at(&invert_at(&g).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&g) <= 1e-9 * fro(&g));
    }

    #[test]
    fn sampled_models_are_exact_at_samples(seed in any::<u64>(), k in 0usize..6) {
        let mut r = rng(seed);
        let omegas: Vec<f64> = (0..6).map(|i| 0.5 * i as f64 + 0.1).collect();
        let values: Vec<_> = omegas.iter().map(|_| complex_matrix(&mut r, 2)).collect();
        let model = TransferMatrixModel::Sampled(SampledResponse::new(omegas.clone(), values.clone()).unwrap());
        prop_assert_eq!(model.evaluate(omegas[k]).unwrap(), values[k].clone());
    }

    #[test]
    fn srg_scales_linearly(seed in any::<u64>(), k in 0.01f64..100.0, n in 2usize..4) {
        let a = complex_matrix(&mut rng(seed), n);
        let lhs = srg(&a.scale(c(k, 0.0)));
        let rhs = srg(&a).scaled(k);
        prop_assert!(boundary_hausdorff(&lhs, &rhs) <= 1e-9 * k * fro(&a));
    }

    #[test]
    fn srg_is_unitarily_invariant(seed in any::<u64>(), n in 2usize..4) {
        let mut r = rng(seed);
        let a = complex_matrix(&mut r, n);
        let u = unitary(&mut r, n);
        let b = &(&u * &a) * &u.adjoint();
        prop_assert!(boundary_hausdorff(&srg(&a), &srg(&b)) <= 1e-6 * fro(&a));
    }

    #[test]
    fn frame_rotation_preserves_srg(seed in any::<u64>(), theta in -3.2f64..3.2) {
        let y = complex_matrix(&mut rng(seed), 2);
        let rotated = rotate_admittance(&y, theta).unwrap();
        prop_assert!(boundary_hausdorff(&srg(&y), &srg(&rotated)) <= 1e-6 * fro(&y));
    }

    #[test]
    fn disk_distance_is_symmetric_and_exact(
        c1 in -5.0f64..5.0, r1 in 0.1f64..2.0, c2 in -5.0f64..5.0, r2 in 0.1f64..2.0,
    ) {
        let (a, b) = (SrgRegion::disk(c1, r1, 512), SrgRegion::disk(c2, r2, 512));
        let (dab, dba) = (region_distance(&a, &b), region_distance(&b, &a));
        prop_assert!((dab - dba).abs() <= 1e-12);
        let gap = (c1 - c2).abs() - r1 - r2;
        // Inscribed polygons lose at most r(1 − cos(π/n)) per disk.
        let slack = (r1 + r2) * (1.0 - (std::f64::consts::PI / 512.0).cos()) + 1e-12;
        if gap < -slack {
            prop_assert_eq!(dab, 0.0);
        } else {
            prop_assert!((dab - gap.max(0.0)).abs() <= slack);
        }
    }

    #[test]
    fn cpl_disk_is_homogeneous(p in 0.0f64..2.0, q in 0.0f64..2.0, v in 0.2f64..1.5, k in 0.1f64..10.0) {
        let base = cpl_disk(&CplParams::new(p, q, v).unwrap()).radius;
        let scaled = cpl_disk(&CplParams::new(k * p, k * q, v).unwrap()).radius;
        prop_assert!((scaled - k * base).abs() <= 1e-12 * (1.0 + k * base));
    }

    #[test]
    fn cpl_draws_its_set_powers(p in 0.0f64..2.0, q in 0.0f64..2.0, theta in -3.2f64..3.2, m in 1.0f64..5.0) {
        let params = CplParams::new(p, q, 0.5).unwrap();
        let v = [m * theta.cos(), m * theta.sin()];
        let i = cpl_current(&params, v).unwrap();
        prop_assert!((v[0] * i[0] + v[1] * i[1] - p).abs() <= 1e-12 * (1.0 + p));
        prop_assert!((v[0] * i[1] - v[1] * i[0] + q).abs() <= 1e-12 * (1.0 + q));
    }

    #[test]
    fn cpl_samples_stay_in_the_disk(p in 0.0f64..2.0, q in 0.0f64..2.0, v in 0.3f64..1.5, seed in any::<u64>()) {
        let params = CplParams::new(p, q, v).unwrap();
        let radius = cpl_disk(&params).radius;
        for z in cpl_srg_sample(&params, 500, seed) {
            prop_assert!(z.norm() <= radius * (1.0 + 1e-9) + 1e-12);
        }
    }

    #[test]
    fn scr_is_scale_free(seed in any::<u64>(), k in 0.01f64..100.0) {
        let mut r = rng(seed);
        let (yg, yc) = (complex_matrix(&mut r, 2), complex_matrix(&mut r, 2));
        let base = scr_value(&yg, &yc).unwrap();
        let scaled = scr_value(&yg.scale(c(k, 0.0)), &yc.scale(c(k, 0.0))).unwrap();
        prop_assert!((scaled - base).abs() <= 1e-12 * base);
    }

    #[test]
    fn rl_model_inverts_the_impedance(r in 0.001f64..1.0, l in 1e-4f64..0.1, w in 0.0f64..1e4) {
        let params = RlGridParams::new(r, l, 314.159).unwrap();
        let got = rl_grid_model(&params).evaluate(w).unwrap();
        let want = invert_at(&params.impedance_at(c(0.0, w))).unwrap();
        prop_assert!(got.max_abs_diff(&want) <= 1e-9 * fro(&want));
    }

    #[test]
    fn kron_matches_the_nodal_solve(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut block = || {
            let m = complex_matrix(&mut r, 2).into_inner() * c(0.3, 0.0)
                + DMatrix::identity(2, 2) * c(2.0, 0.0);
            Element::Block(ComplexMatrix::new(m).unwrap())
        };
        let branches = vec![
            Branch { from: 0, to: 1, element: block() },
            Branch { from: 1, to: 2, element: block() },
            Branch { from: 0, to: 2, element: block() },
        ];
        let shunts = (0..3).map(|bus| Shunt { bus, element: block() }).collect();
        let case = NetworkCase::new(3, branches, shunts, vec![0, 2]).unwrap();
        let z = kron_reduce(&case, 1.0).unwrap();
        let zbus = case.bus_admittance(1.0).unwrap().try_inverse().unwrap();
        let idx = [0, 1, 4, 5];
        let want = ComplexMatrix::new(DMatrix::from_fn(4, 4, |i, j| zbus[(idx[i], idx[j])])).unwrap();
        prop_assert!(z.max_abs_diff(&want) <= 1e-9 * fro(&want));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn margins_are_frame_invariant(seed in any::<u64>(), theta in -3.2f64..3.2) {
        let mut r = rng(seed);
        let yc = complex_matrix(&mut r, 2);
        let yg = complex_matrix(&mut r, 2).scale(c(3.0, 0.0));
        let opts = CertifyOptions::default();
        let base = certify_linear(&Constant(yc.clone()), &Constant(yg.clone()), &grid(), &opts).unwrap();
        let rotated = certify_linear(
            &Constant(rotate_admittance(&yc, theta).unwrap()),
            &Constant(rotate_admittance(&yg, theta).unwrap()),
            &grid(),
            &opts,
        )
        .unwrap();
        for (a, b) in base.margin.iter().zip(&rotated.margin) {
            prop_assert!((a - b).abs() <= 1e-6 * (fro(&yc) + fro(&yg)));
        }
    }

    #[test]
    fn growing_the_cpl_never_raises_the_margin(seed in any::<u64>(), p in 0.0f64..1.0, q in 0.0f64..1.0, k in 1.0f64..4.0) {
        let mut r = rng(seed);
        let yc = Constant(complex_matrix(&mut r, 2));
        let y_l = Constant(&ComplexMatrix::identity(2).scale(c(6.0, 0.0)) + &complex_matrix(&mut r, 2));
        let opts = CertifyOptions::default();
        let small = CplParams::new(p, q, 1.0).unwrap();
        let large = CplParams::new(k * p, k * q, 1.0).unwrap();
        let a = certify_with_cpl(&yc, &y_l, &small, None, &grid(), &opts).unwrap();
        let b = certify_with_cpl(&yc, &y_l, &large, None, &grid(), &opts).unwrap();
        for (ma, mb) in a.margin.iter().zip(&b.margin) {
            prop_assert!(*mb <= *ma + 1e-9, "margin rose from {ma} to {mb}");
        }
    }
}

#[test]
fn unitary_helper_is_unitary() {
    let u = unitary(&mut rng(3), 3);
    let prod = &u * &u.adjoint();
    assert!(prod.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
}
