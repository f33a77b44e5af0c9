mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use radoncomp_core::catalog;
use radoncomp_core::sphere::*;
use radoncomp_core::spherical_radon::*;
use radoncomp_core::Error;

fn opts(l_max: usize) -> SphericalOptions {
    SphericalOptions { l_max, ..SphericalOptions::default() }
}

fn p2_family(g: &Arc<SphereGrid>, a: f64) -> SphericalFunction {
    SphericalFunction::from_fn(g, move |u| 1.0 + a * 0.5 * (3.0 * u[2] * u[2] - 1.0))
}

#[test]
fn radon_of_z_squared() {
    let z2 = |u: &[f64; 3]| u[2] * u[2];
    assert!(sradon_direct_fn(z2, &[0.0, 0.0, 1.0], 256).abs() < 1e-14);
    assert!((sradon_direct_fn(z2, &[1.0, 0.0, 0.0], 256) - PI).abs() < 1e-13);
    let g = grid(16, 32);
    let f = SphericalFunction::from_fn(&g, z2);
    let s = analyze(&f, 8).unwrap();
    let r = sradon_spectral(&s).unwrap();
    assert!(r.eval(&[0.0, 0.0, 1.0]).abs() < 1e-12);
    assert!((r.eval(&[0.0, 1.0, 0.0]) - PI).abs() < 1e-12);
    // on a general direction: π(1 − ξ_z²)
    let xi = normalize([0.3, -0.4, 0.8]);
    assert!((sradon_direct(&f, &xi).unwrap() - PI * (1.0 - xi[2] * xi[2])).abs() < 1e-12);
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

#[test]
fn radon_of_constant_is_circumference() {
    let g = grid(12, 24);
    let one = SphericalFunction::constant(&g, 1.0);
    let r = sradon_grid(&one, 8).unwrap();
    assert!(r.values.iter().all(|v| (v - 2.0 * PI).abs() < 1e-12));
}

#[test]
fn odd_spectra_are_rejected() {
    let mut s = HarmonicSpectrum::zeros(3);
    s.set(1, 0, 1.0);
    assert!(sradon_spectral(&s).is_err());
}

#[test]
fn direct_and_spectral_agree_on_random_even_functions() {
    let g = grid(24, 48);
    let mut r = rng(3);
    for _ in 0..50 {
        let s = random_spectrum(&mut r, 16, true);
        let spec = sradon_spectral(&s).unwrap();
        let scale = spec.max_abs().max(1e-12);
        for _ in 0..8 {
            let xi = normalize([
                rand::Rng::gen_range(&mut r, -1.0..1.0),
                rand::Rng::gen_range(&mut r, -1.0..1.0),
                rand::Rng::gen_range(&mut r, -1.0..1.0),
            ]);
            let d = sradon_direct_spectrum(&s, &xi);
            assert!((d - spec.eval(&xi)).abs() <= 1e-8 * scale);
        }
        let _ = &g;
    }
}

#[test]
fn verify_accepts_equal_constants_and_rejects_bad_input() {
    let g = grid(40, 80);
    let one = SphericalFunction::constant(&g, 1.0);
    let rep = verify_comparison_spherical(&one, &one, 2.0, &opts(32)).unwrap();
    assert!(rep.hypothesis_holds && rep.conclusion_holds && !rep.is_violation());
    assert!(rep.chain.fubini_residual < 1e-12);
    assert!(rep.chain.parseval_residual < 1e-10);

    let z = SphericalFunction::from_fn(&g, |u| u[2] * u[2] - 0.5);
    assert!(matches!(
        verify_comparison_spherical(&z, &one, 2.0, &opts(32)),
        Err(Error::NotPositive { .. })
    ));
    let odd = SphericalFunction::from_fn(&g, |u| 1.0 + 0.2 * u[2]);
    assert!(matches!(
        verify_comparison_spherical(&odd, &one, 2.0, &opts(32)),
        Err(Error::ParityViolation { .. })
    ));
    let big = SphericalFunction::constant(&g, 2.0);
    assert!(matches!(
        verify_comparison_spherical(&big, &one, 2.0, &opts(32)),
        Err(Error::DominationFails { .. })
    ));
    assert!(matches!(
        verify_comparison_spherical(&one, &one, 0.0, &opts(32)),
        Err(Error::OutOfRange(_))
    ));
}

#[test]
fn comparison_holds_on_certified_pairs() {
    let g = grid(20, 40);
    let mut r = rng(11);
    for &p in &[1.5, 2.0, 3.0, 0.25, 0.5] {
        let mut n = 0;
        while n < 20 {
            let Some((f, h)) = certified_pair(&mut r, &g, p, 8) else { continue };
            let rep = verify_comparison_spherical(&f, &h, p, &opts(8)).unwrap();
            assert!(rep.hypothesis_holds);
            assert!(rep.conclusion_holds, "p={p}: gap {}", rep.norm_gap);
            if p > 1.0 {
                assert!(rep.chain.pairing_lhs <= rep.chain.pairing_rhs + 1e-9);
            }
            assert!(rep.chain.parseval_residual < 1e-8);
            n += 1;
        }
    }
}

#[test]
fn constructor_beats_the_threshold() {
    let g = grid(40, 80);
    let input = p2_family(&g, 0.55);
    let ce = construct_counterexample_spherical(&input, 2.0, &opts(32)).unwrap();
    assert_eq!(ce.branch, Branch::Upper);
    let max_rg = sradon_grid(&ce.g, 32).unwrap().max_abs();
    assert!(ce.domination_margin >= -1e-9 * max_rg);
    assert!(ce.min_constructed > 0.0 && ce.f.min() > 0.0);
    assert!(ce.norm_gap > 1e-8);
    assert!(ce.identity_residual < 1e-10);
    // the outcome must survive an independent check
    let rep = verify_comparison_spherical(&ce.f, &ce.g, 2.0, &opts(32)).unwrap();
    assert!(!rep.hypothesis_holds && !rep.conclusion_holds);
}

#[test]
fn constructor_declines_when_comparison_holds() {
    let g = grid(40, 80);
    assert!(matches!(
        construct_counterexample_spherical(&p2_family(&g, 0.3), 2.0, &opts(32)),
        Err(Error::NotApplicable(_))
    ));
    assert!(matches!(
        construct_counterexample_spherical(&p2_family(&g, 0.8), 1.0, &opts(32)),
        Err(Error::OutOfRange(_))
    ));
}

#[test]
fn constructor_lower_branch() {
    let g = grid(40, 80);
    // a body with an equatorial groove: f^{-1/2} is not a radial function of an intersection body
    let input = SphericalFunction::from_fn(&g, |u| 1.0 + 3.0 * (1.0 - u[2] * u[2]).powi(4));
    let ce = construct_counterexample_spherical(&input, 0.5, &opts(32)).unwrap();
    assert_eq!(ce.branch, Branch::Lower);
    assert!(ce.domination_margin >= -ce.domination_tolerance);
    assert!(ce.g.min() > 0.0);
    assert!(ce.norm_gap > 1e-8);
    let rep = verify_comparison_spherical(&ce.f, &ce.g, 0.5, &opts(32)).unwrap();
    assert!(!rep.hypothesis_holds && !rep.conclusion_holds);
}

#[test]
fn slicing_is_sharp_on_the_constant() {
    let g = grid(40, 80);
    let one = SphericalFunction::constant(&g, 1.0);
    let rep = slicing_check(&one, 2.0, false, &opts(32)).unwrap();
    let want = (4.0 * PI).sqrt();
    assert!((rep.lhs - want).abs() < 1e-10 && (rep.rhs - want).abs() < 1e-10);
    assert!(rep.holds && rep.hypothesis_holds);
    let dual = slicing_check(&one, 0.5, true, &opts(32)).unwrap();
    assert!((dual.lhs - dual.rhs).abs() < 1e-9 * dual.lhs);
    assert!(matches!(slicing_check(&one, 0.5, false, &opts(32)), Err(Error::OutOfRange(_))));
    assert!(matches!(slicing_check(&one, 2.0, true, &opts(32)), Err(Error::OutOfRange(_))));
}

#[test]
fn slicing_on_certified_functions() {
    let g = grid(20, 40);
    let mut r = rng(5);
    let mut n = 0;
    while n < 40 {
        let f = random_positive_even(&mut r, &g, 8, 1.0, 0.4);
        let rep = slicing_check(&f, 2.0, false, &opts(8)).unwrap();
        if !rep.hypothesis_holds {
            continue;
        }
        assert!(rep.margin >= 0.0, "margin {}", rep.margin);
        n += 1;
    }
}

#[test]
fn intersection_body_of_a_ball() {
    let g = grid(24, 48);
    let ball = StarBody::ball(&g, 1.7).unwrap();
    let (il, rep) = intersection_body_of(&ball, 16).unwrap();
    for v in &il.radial.values {
        assert!((v - PI * 1.7 * 1.7).abs() < 1e-10);
    }
    assert!(rep.direct_vs_spectral < 1e-10);
    assert!(rep.fourier_identity_residual < 1e-10);
}

#[test]
fn intersection_body_of_an_ellipsoid() {
    let g = grid(32, 64);
    let (a, b, c) = (1.0, 1.0, 2.0);
    let body = StarBody::ellipsoid(&g, [a, b, c]).unwrap();
    let (il, rep) = intersection_body_of(&body, 30).unwrap();
    for (u, v) in g.nodes().iter().zip(&il.radial.values) {
        // area of the central section of an ellipsoid
        let want = PI * a * b * c
            / (a * a * u[0] * u[0] + b * b * u[1] * u[1] + c * c * u[2] * u[2]).sqrt();
        assert!((v - want).abs() < 1e-9, "{v} vs {want}");
    }
    assert!(rep.direct_vs_spectral < 1e-3);
    let pole = il.rho(&[0.0, 0.0, 1.0]).unwrap();
    assert!((pole - PI).abs() < 1e-3);
}

#[test]
fn star_bodies_reject_bad_radial_functions() {
    let g = grid(8, 16);
    assert!(StarBody::ball(&g, -1.0).is_err());
    let lopsided = SphericalFunction::from_fn(&g, |u| 1.0 + 0.5 * u[0]);
    assert!(matches!(StarBody::new("x", lopsided), Err(Error::ParityViolation { .. })));
}

#[test]
fn gaussian_section_and_body_measures() {
    let g = grid(16, 32);
    let rho0: f64 = 1.3;
    let ball = StarBody::ball(&g, rho0).unwrap();
    let gauss = catalog::gaussian(1.0, &g).unwrap();
    let s = section_measure(&ball, &gauss, &normalize([0.2, 0.5, -0.7])).unwrap();
    assert!((s - PI * (1.0 - (-rho0 * rho0).exp())).abs() < 1e-10);
    let m = body_measure(&ball, &gauss).unwrap();
    let want = 4.0 * PI * (PI.sqrt() / 4.0 * libm::erf(rho0) - rho0 * (-rho0 * rho0).exp() / 2.0);
    assert!((m - want).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radon_commutes_with_rotation_about_z(seed in any::<u64>(), phi in 0.0f64..6.28) {
        let s = random_spectrum(&mut rng(seed), 8, true);
        let rot = |u: &[f64; 3]| [phi.cos() * u[0] - phi.sin() * u[1], phi.sin() * u[0] + phi.cos() * u[1], u[2]];
        let f = |u: &[f64; 3]| s.eval(&rot(u));
        let xi = normalize([0.4, 0.1, 0.6]);
        let a = sradon_direct_fn(f, &xi, 256);
        let b = sradon_direct_fn(|u| s.eval(u), &rot(&xi), 256);
        prop_assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn radon_is_self_adjoint(seed in any::<u64>()) {
        let g = grid(16, 32);
        let mut r = rng(seed);
        let a = synthesize(&random_spectrum(&mut r, 10, true), &g);
        let b = synthesize(&random_spectrum(&mut r, 10, true), &g);
        let ra = sradon_grid(&a, 10).unwrap();
        let rb = sradon_grid(&b, 10).unwrap();
        let lhs: f64 = g.weights().iter().zip(&ra.values).zip(&b.values).map(|((w, x), y)| w * x * y).sum();
        let rhs: f64 = g.weights().iter().zip(&a.values).zip(&rb.values).map(|((w, x), y)| w * x * y).sum();
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn double_radon_acts_by_squared_eigenvalues(seed in any::<u64>()) {
        let s = random_spectrum(&mut rng(seed), 12, true);
        let rr = sradon_spectral(&sradon_spectral(&s).unwrap()).unwrap();
        for k in (0..=12usize).step_by(2) {
            let c = radoncomp_core::homogeneous::funk_eigenvalue(k);
            for m in -(k as i64)..=(k as i64) {
                prop_assert!((rr.get(k, m) - c * c * s.get(k, m)).abs() < 1e-10 * (1.0 + c * c));
            }
        }
    }

    #[test]
    fn verification_is_scale_invariant(seed in any::<u64>(), c in 0.2f64..5.0) {
        let g = grid(20, 40);
        let mut r = rng(seed);
        if let Some((f, h)) = certified_pair(&mut r, &g, 2.0, 6) {
            let a = verify_comparison_spherical(&f, &h, 2.0, &opts(6)).unwrap();
            let b = verify_comparison_spherical(&f.map(|v| c * v), &h.map(|v| c * v), 2.0, &opts(6)).unwrap();
            prop_assert_eq!(a.hypothesis_holds, b.hypothesis_holds);
            prop_assert!(rel(b.norm_gap, c * a.norm_gap) < 1e-8 || (a.norm_gap.abs() < 1e-12));
        }
    }
}
