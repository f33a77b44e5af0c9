mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use radoncomp_core::catalog::{self, CatalogParams};
use radoncomp_core::comparison_rn::*;
use radoncomp_core::radon::*;
use radoncomp_core::Error;

fn opts() -> RnOptions {
    RnOptions::with_grid(grid(16, 32))
}

#[test]
fn gaussian_norms() {
    let g = grid(16, 32);
    let phi = catalog::gaussian(1.0, &g).unwrap();
    assert!(rel(lp_norm_rn(&phi, 1.0, &g).unwrap(), PI.powf(1.5)) < 1e-10);
    assert!(rel(lp_norm_rn(&phi, 2.0, &g).unwrap(), (PI / 2.0).powf(0.75)) < 1e-10);
    // ∫ e^{-p|x|²} = (π/p)^{3/2}
    for p in [0.5, 1.5, 3.0] {
        let want = (PI / p).powf(1.5).powf(1.0 / p);
        assert!(rel(lp_norm_rn(&phi, p, &g).unwrap(), want) < 1e-9, "p={p}");
    }
    assert!(matches!(lp_norm_rn(&phi, 0.0, &g), Err(Error::OutOfRange(_))));
}

#[test]
fn heavy_tails_are_reported() {
    let g = grid(16, 32);
    let e = catalog::by_name("exp-ell", &CatalogParams::isotropic(&g)).unwrap();
    // f ~ 2π/|x| at infinity is not integrable
    assert!(matches!(lp_norm_rn(&e.f, 1.0, &g), Err(Error::TailTooHeavy { .. })));
    // f⁶ is, but the default truncation leaves too much mass outside
    let i = lp_integral_rn(&e.f, 6.0, &g).unwrap();
    assert!(i.tail > 1e-6);
    let mut wide = e.f.clone();
    wide.extent = 4000.0;
    assert!(lp_integral_rn(&wide, 6.0, &g).unwrap().tail < 1e-6);
}

#[test]
fn mollified_ball_volume() {
    let g = grid(16, 32);
    let ball = catalog::mollified_ball(1.0, 0.01, &g).unwrap();
    assert!((lp_norm_rn(&ball, 1.0, &g).unwrap() - 4.0 * PI / 3.0).abs() < 1e-8);
    // disc area through a central plane
    let s = radon_transform(&ball, RadonRoute::Auto, &opts()).unwrap();
    let mid = s.t.n / 2;
    assert!((s.row(0)[mid] - PI).abs() < 1e-3);
}

#[test]
fn domination_checks() {
    let o = opts();
    let g = &o.directions;
    let a = radon_transform(&catalog::gaussian(1.0, g).unwrap(), RadonRoute::Auto, &o).unwrap();
    let b = radon_transform(&catalog::gaussian(1.0, g).unwrap().scaled(2.0), RadonRoute::Auto, &o).unwrap();
    let m = sinogram_dominates(&a, &b).unwrap();
    assert!(m.abs() < 1e-12, "{m}");
    assert!(sinogram_dominates(&b, &a).unwrap() < -3.0);
    let mut o2 = o.clone();
    o2.t = TGrid::new(8.0, 512);
    let c = radon_transform(&catalog::gaussian(1.0, g).unwrap(), RadonRoute::Auto, &o2).unwrap();
    assert!(matches!(sinogram_dominates(&a, &c), Err(Error::GridMismatch)));
}

#[test]
fn indicator_example() {
    let o = opts();
    let g = &o.directions;
    let m: f64 = 2.0;
    let phi = catalog::mollified_ball(1.0, 1e-2, g).unwrap();
    let psi = catalog::mollified_ball(m, 1e-2 * m, g).unwrap().scaled(m.powi(-2));
    let r = verify_comparison_radon(&phi, &psi, 2.0, &o).unwrap();
    assert!(r.domination_margin >= -1e-3, "{:e}", r.domination_margin);
    let ratio = r.lp_psi.powi(2) / r.lp_phi.powi(2);
    assert!((ratio - m.powf(3.0 - 2.0 * 2.0)).abs() < 1e-3, "{ratio}");
    assert_eq!(r.hypothesis, Hypothesis::Fails);
    assert!(!r.conclusion_holds && !r.is_violation());
}

#[test]
fn cavalieri_branch() {
    let o = opts();
    let g = &o.directions;
    let phi = catalog::mollified_ball(1.0, 1e-2, g).unwrap();
    let psi = catalog::mollified_ball(2.0, 2e-2, g).unwrap().scaled(0.25);
    let r = verify_comparison_radon(&phi, &psi, 1.0, &o).unwrap();
    assert_eq!(r.hypothesis, Hypothesis::NotRequired);
    assert!(r.conclusion_holds);
    assert!(r.chain.cavalieri_residual < 1e-6, "{:e}", r.chain.cavalieri_residual);
}

#[test]
fn certified_pairs_satisfy_comparison() {
    let o = opts();
    let g = &o.directions;
    // catalog intersection functions decay like 1/|x|; φ = f⁴ is in L¹ ∩ L^p
    // for p = 5/4 and φ^{p-1} = f
    let e = catalog::by_name("erf-type", &CatalogParams::isotropic(g)).unwrap();
    let mut phi = e.f.pow(4.0);
    phi.extent = 2000.0;
    let p = 1.25;
    let r = verify_comparison_radon(&phi, &phi.scaled(1.5), p, &o).unwrap();
    assert_eq!(r.hypothesis, Hypothesis::Holds);
    assert!(r.conclusion_holds);
    assert!(r.chain.pairing_lhs <= r.chain.pairing_rhs * (1.0 + 1e-9));
    assert!(r.chain.pairing_rhs <= r.chain.holder_bound * (1.0 + 1e-6));
    assert!(r.chain.measure_pairing_residual < 1e-4, "{:e}", r.chain.measure_pairing_residual);

    let gauss = catalog::gaussian(1.0, g).unwrap();
    let r = verify_comparison_radon(&gauss, &gauss.scaled(1.5), 2.0, &o).unwrap();
    assert_eq!(r.hypothesis, Hypothesis::Fails);
    assert!(r.conclusion_holds);
}

#[test]
fn verifier_rejects_bad_inputs() {
    let o = opts();
    let g = &o.directions;
    let gauss = catalog::gaussian(1.0, g).unwrap();
    assert!(matches!(
        verify_comparison_radon(&gauss.scaled(2.0), &gauss, 2.0, &o),
        Err(Error::DominationFails { .. })
    ));
    assert!(matches!(
        verify_comparison_radon(&gauss.scaled(-1.0), &gauss, 2.0, &o),
        Err(Error::InputInvalid(_))
    ));
    assert!(matches!(verify_comparison_radon(&gauss, &gauss, -1.0, &o), Err(Error::OutOfRange(_))));
}

#[test]
fn window_has_non_negative_closed_radon() {
    let o = opts();
    let g = &o.directions;
    for (j, w) in [(1, 0.4), (2, 0.67), (3, 1.0)] {
        let h = radon_window(j, w, g);
        let s = radon_transform(&h, RadonRoute::Polar, &o).unwrap();
        let ts = s.t.points();
        for d in 0..s.n_directions() {
            for (v, t) in s.row(d).iter().zip(&ts) {
                let want = t.powi(2 * j as i32) * (-t * t / (w * w)).exp();
                assert!((v - want).abs() < 1e-8, "j={j} w={w} t={t}: {v} vs {want}");
            }
        }
    }
}

#[test]
fn gaussian_counterexample() {
    let o = opts();
    let g = &o.directions;
    let gauss = catalog::gaussian(1.0, g).unwrap();
    let ce = construct_counterexample_radon(&gauss, 2.0, &o).unwrap();
    assert_eq!(ce.branch, RnBranch::Upper);
    assert!(ce.min_constructed >= 0.0);
    let max_rpsi = radon_transform(&ce.psi, RadonRoute::Auto, &o).unwrap().max_abs();
    assert!(ce.domination_margin >= -1e-9 * max_rpsi);
    assert!(ce.norm_gap > 1e-8 && ce.power_gap > 1e-8);
    assert!(ce.pairing_gain < 0.0);
    // an independent re-check of the output pair
    let r = verify_comparison_radon(&ce.phi, &ce.psi, 2.0, &o).unwrap();
    assert!(!r.conclusion_holds);
    assert!(r.domination_margin >= -r.domination_tolerance);
}

#[test]
fn constructor_declines_and_rejects() {
    let o = opts();
    let g = &o.directions;
    let e = catalog::by_name("gauss-r2", &CatalogParams::isotropic(g)).unwrap();
    assert!(matches!(construct_counterexample_radon(&e.f, 2.0, &o), Err(Error::NotApplicable(_))));
    let gauss = catalog::gaussian(1.0, g).unwrap();
    assert!(matches!(construct_counterexample_radon(&gauss, 0.5, &o), Err(Error::InputInvalid(_))));
    assert!(matches!(construct_counterexample_radon(&gauss, 1.0, &o), Err(Error::OutOfRange(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn norms_scale_homogeneously(c in 0.1f64..10.0, p in 0.5f64..4.0) {
        let g = grid(12, 24);
        let phi = catalog::gaussian(1.3, &g).unwrap();
        let a = lp_norm_rn(&phi, p, &g).unwrap();
        let b = lp_norm_rn(&phi.scaled(c), p, &g).unwrap();
        prop_assert!(rel(b, c * a) < 1e-10);
    }

    #[test]
    fn dilation_changes_norm_ratio_by_the_predicted_power(m in 1.2f64..3.0, p in 1.1f64..3.0) {
        // ψ(x) = m^{-2}φ(x/m) has the same hyperplane integrals scaled by m^{-2}·m² = 1
        let g = grid(12, 24);
        let a = 1.0;
        let phi = catalog::gaussian(a, &g).unwrap();
        let psi = catalog::gaussian(a / (m * m), &g).unwrap().scaled(m.powi(-2));
        let ratio = (lp_norm_rn(&psi, p, &g).unwrap() / lp_norm_rn(&phi, p, &g).unwrap()).powf(p);
        prop_assert!(rel(ratio, m.powf(3.0 - 2.0 * p)) < 1e-9);
    }
}
