mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use radoncomp_core::catalog::{self, CatalogParams};
use radoncomp_core::homogeneous::WitnessPoint;
use radoncomp_core::radial::{Decay, RadialProfile, SeparableFunction, SeparableTerm};
use radoncomp_core::radon::*;
use radoncomp_core::sphere::SphericalFunction;
use radoncomp_core::Error;

fn max_err(s: &Sinogram, f: impl Fn(f64) -> f64) -> f64 {
    let ts = s.t.points();
    (0..s.n_directions())
        .flat_map(|d| s.row(d).iter().zip(&ts).map(|(v, t)| (v - f(*t)).abs()).collect::<Vec<_>>())
        .fold(0.0, f64::max)
}

fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[test]
fn gaussian_radon_on_every_route() {
    let g = grid(16, 32);
    let opts = RnOptions::with_grid(g.clone());
    for a in [1.0, 2.5] {
        let phi = catalog::gaussian(a, &g).unwrap();
        for route in [RadonRoute::Auto, RadonRoute::Polar, RadonRoute::FourierSlice] {
            let s = radon_transform(&phi, route, &opts).unwrap();
            let err = max_err(&s, |t| PI / a * (-a * t * t).exp());
            assert!(err <= 1e-8, "a={a} {route:?}: {err:e}");
            assert!(s.evenness_residual() < 1e-12);
        }
    }
}

#[test]
fn sampled_radial_profile_matches_closed_forms() {
    let g = grid(16, 32);
    let opts = RnOptions::with_grid(g.clone());
    let u: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(|r: f64| (-r * r).exp());
    let prof = RadialProfile::from_samples(
        RadialProfile::from_fn(u, 8.0, 4097, Decay::Schwartz).samples,
        8.0,
        Decay::Schwartz,
    );
    let phi = SeparableFunction::from_terms("sampled", vec![SeparableTerm::radial(prof, &g)]);
    let s = radon_transform(&phi, RadonRoute::Auto, &opts).unwrap();
    assert!(max_err(&s, |t| PI * (-t * t).exp()) < 1e-6);
    let r: Vec<f64> = (0..50).map(|i| 0.1 * i as f64).collect();
    let fr = fourier_along_ray(&phi, &[0.0, 0.0, 1.0], &r).unwrap();
    for (v, r) in fr.iter().zip(&r) {
        assert!((v - PI.powf(1.5) * (-r * r / 4.0).exp()).abs() < 1e-6);
    }
}

#[test]
fn fourier_slice_identity() {
    let g = grid(16, 32);
    let opts = RnOptions::with_grid(g.clone());
    let phi = catalog::gaussian(1.0, &g).unwrap();
    let s = radon_transform(&phi, RadonRoute::Polar, &opts).unwrap();
    assert!(fourier_slice_residual(&phi, &s, 8.0, 64).unwrap() < 1e-8);
}

#[test]
fn dual_radon_of_the_gaussian_sinogram() {
    let g = grid(24, 48);
    let opts = RnOptions::with_grid(g.clone());
    let s = Sinogram::from_fn(&g, opts.t, |t, _| PI * (-t * t).exp());
    let pts: Vec<[f64; 3]> = (0..12).map(|i| [0.3 * i as f64, 0.1 * i as f64, -0.2 * i as f64]).collect();
    let v = dual_radon(&s, &pts);
    for (x, v) in pts.iter().zip(&v) {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let want = if r == 0.0 { 4.0 * PI * PI } else { 2.0 * PI.powf(2.5) * erf(r) / r };
        assert!((v - want).abs() < 1e-6 * want, "r={r}: {v} vs {want}");
    }
}

#[test]
fn gaussian_is_not_an_intersection_function() {
    let g = grid(16, 32);
    let opts = RnOptions::with_grid(g.clone());
    let phi = catalog::gaussian(1.0, &g).unwrap();
    let c = certify_intersection_function(&phi, &opts).unwrap();
    assert!(!c.is_intersection_function());
    let ts = c.t.points();
    for d in 0..c.directions.len() {
        let m = c.transform(d);
        let err = m
            .iter()
            .zip(&ts)
            .map(|(v, t)| (v - PI.powf(1.5) * 2.0 * PI.sqrt() * (2.0 - 4.0 * t * t) * (-t * t).exp()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "direction {d}: {err:e}");
    }
    match c.for_direction(c.witness).witness_point {
        WitnessPoint::Frequency { t, .. } => assert!(t.abs() > 0.5f64.sqrt()),
        other => panic!("unexpected witness {other:?}"),
    }
    let w = c.negative_windows(0);
    assert!(!w.is_empty());
    assert!(w.iter().all(|(a, b)| a.abs() >= 0.5f64.sqrt() - 0.02 || b.abs() >= 0.5f64.sqrt() - 0.02));
}

fn ex(name: &str, g: &Arc<radoncomp_core::sphere::SphereGrid>) -> catalog::CatalogEntry {
    catalog::by_name(name, &CatalogParams::isotropic(g)).unwrap()
}

#[test]
fn gauss_r2_ray_function_and_transform() {
    let g = grid(16, 32);
    let opts = RnOptions::with_grid(g.clone());
    let e = ex("gauss-r2", &g);
    let r: Vec<f64> = (1..80).map(|i| 0.05 * i as f64).collect();
    for d in [[0.0, 0.0, 1.0], [0.6, 0.0, 0.8]] {
        let fr = fourier_along_ray(&e.f, &d, &r).unwrap();
        for (v, r) in fr.iter().zip(&r) {
            assert!((r * r * v - 8.0 * PI * PI * (-r * r).exp()).abs() < 1e-6);
        }
    }
    let c = certify_intersection_function(&e.f, &opts).unwrap();
    assert!(c.is_intersection_function());
    let ts = c.t.points();
    let err = c
        .transform(0)
        .iter()
        .zip(&ts)
        .map(|(v, t)| (v - 8.0 * PI.powf(2.5) * (-t * t / 4.0).exp()).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-6, "{err:e}");
    let s = Sinogram::from_fn(&g, opts.t, |t, u| (e.g)(t, u));
    assert!(relation_residual(&s, &e.f, &default_rho_grid()[1..]).unwrap() <= 1e-5);
}

#[test]
fn isotropic_examples_have_explicit_spatial_forms() {
    let g = grid(16, 32);
    let cases: [(&str, fn(f64) -> f64); 3] = [
        ("gauss-r2", |s| 2.0 * PI * erf(s / 2.0) / s),
        ("erf-type", |s| 2.0 * PI.powf(1.5) * erf(s) / s),
        ("exp-ell", |s| 4.0 * s.atan() / s),
    ];
    for (name, want) in cases {
        let e = ex(name, &g);
        for s in [0.1, 0.7, 1.5, 3.0, 9.0] {
            let v = e.f.eval(&[0.0, s * 0.6, s * 0.8]);
            assert!(rel(v, want(s)) < 1e-8, "{name} at {s}: {v} vs {}", want(s));
        }
    }
}

#[test]
fn intersection_function_recovered_from_its_datum() {
    let g = grid(16, 32);
    let opts = RnOptions::with_grid(g.clone());
    let eval = grid(8, 16);
    let radii = [0.25, 0.5, 1.0, 2.0, 3.0];
    let cases: [(&str, fn(f64) -> f64); 2] =
        [("erf-type", |s| 2.0 * PI.powf(1.5) * erf(s) / s), ("exp-ell", |s| 4.0 * s.atan() / s)];
    for (name, want) in cases {
        let e = ex(name, &g);
        let s = Sinogram::from_fn(&g, opts.t, |t, u| (e.g)(t, u));
        let (shells, rep) = intersection_function_of(&s, &radii, &eval, 8).unwrap();
        for (r, row) in radii.iter().zip(&shells.values) {
            for v in row {
                assert!(rel(*v, want(*r)) < 1e-3, "{name} at {r}: {v} vs {}", want(*r));
            }
        }
        assert!(rep.angular_truncation < 1e-10);
        assert!(rep.dual_radon_agreement < 1e-3, "{name}: {:e}", rep.dual_radon_agreement);
    }
}

#[test]
fn catalog_verdicts() {
    let g = grid(16, 32);
    let opts = RnOptions::with_grid(g.clone());
    for name in ["gauss-r2", "erf-type", "exp-ell", "cauchy-ell"] {
        let e = ex(name, &g);
        let c = certify_intersection_function(&e.f, &opts).unwrap();
        assert_eq!(c.is_intersection_function(), e.expected_intersection, "{name}");
    }
    let ell = SphericalFunction::constant(&g, 1.0);
    for (q, want) in [(1.0, true), (1.5, true), (4.0, false)] {
        let e = catalog::gamma_q(q, &ell).unwrap();
        assert_eq!(e.expected_intersection, want);
        let c = certify_intersection_function(&e.f, &opts).unwrap();
        assert_eq!(c.is_intersection_function(), want, "q={q}");
    }
}

#[test]
fn gamma_q_table_against_independent_integral() {
    for q in [1.0, 1.5, 2.0, 3.0, 4.0] {
        let t = catalog::GammaQ::new(q).unwrap();
        for s in [0.3, 1.0, 2.5, 6.0] {
            let want = 2.0 * catalog::gamma_q_sine_integral(q, s);
            assert!((t.integral_to(s) - want).abs() < 1e-7, "q={q} s={s}");
        }
    }
    // closed forms: γ_1(t) = 2/(1+t²), γ_2(t) = √π e^{−t²/4}
    let t1 = catalog::GammaQ::new(1.0).unwrap();
    let t2 = catalog::GammaQ::new(2.0).unwrap();
    for t in [0.0, 0.5, 3.0, 20.0] {
        assert!((t1.eval(t) - 2.0 / (1.0 + t * t)).abs() < 1e-12);
        assert!((t2.eval(t) - PI.sqrt() * (-t * t / 4.0).exp()).abs() < 1e-12);
    }
    assert!(matches!(catalog::GammaQ::new(0.5), Err(Error::OutOfRange(_))));
}

#[test]
fn anisotropic_examples_satisfy_the_relation() {
    let g = grid(16, 32);
    let ell = SphericalFunction::from_fn(&g, |u| 1.0 + 0.3 * u[2] * u[2]);
    let rho: Vec<f64> = (1..50).map(|i| 0.16 * i as f64).collect();
    // a Gaussian datum is resolved on the default range; the Cauchy-type one
    // decays like t^{-2} and needs a long range
    let mut wide = RnOptions::with_grid(g.clone());
    wide.t = TGrid::new(256.0, 32768);
    let cases = [
        (catalog::erf_type(1.0, 1.0, &ell).unwrap(), RnOptions::with_grid(g.clone()), 1e-5),
        (catalog::exp_ell(&ell).unwrap(), wide, 5e-4),
    ];
    for (e, opts, tol) in cases {
        let s = Sinogram::from_fn(&g, opts.t, |t, u| (e.g)(t, u));
        let r = relation_residual(&s, &e.f, &rho).unwrap();
        assert!(r < tol, "{}: {r:e}", e.name);
    }
}

#[test]
fn sums_of_intersection_functions_are_intersection_functions() {
    let g = grid(16, 32);
    let opts = RnOptions::with_grid(g.clone());
    let a = ex("gauss-r2", &g);
    let b = ex("exp-ell", &g);
    let sum = a.f.linear_combination(0.7, &b.f, 1.3);
    assert!(certify_intersection_function(&sum, &opts).unwrap().is_intersection_function());
}

#[test]
fn classification_witness_reproduces_pairings() {
    let g = grid(16, 32);
    let opts = RnOptions::with_grid(g.clone());
    let e = ex("gauss-r2", &g);
    let c = certify_intersection_function(&e.f, &opts).unwrap();
    let probes: Vec<GaussianProbe> = (0..10)
        .map(|i| GaussianProbe { width: 0.7 + 0.1 * i as f64, center: [0.1 * i as f64, 0.05 * i as f64, 0.0] })
        .collect();
    let lhs = radoncomp_core::sphere::build_grid(32, 64).unwrap();
    let w = classification_witness(&e.f, &c, &probes, &lhs).unwrap();
    assert!(w.max_residual <= 1e-4, "{:e}", w.max_residual);
    assert!((w.calibration - 1.0).abs() < 1e-6);
    assert!(w.min_density >= -1e-9);

    let gauss = catalog::gaussian(1.0, &g).unwrap();
    let bad = certify_intersection_function(&gauss, &opts).unwrap();
    assert!(matches!(classification_witness(&gauss, &bad, &probes, &lhs), Err(Error::CertificateRequired)));
}

#[test]
fn probe_radon_is_consistent() {
    let p = GaussianProbe { width: 0.8, center: [0.3, -0.2, 0.5] };
    // integrate the probe over a plane directly
    let theta = [0.0, 0.0, 1.0];
    let t = 0.4;
    let n = 400;
    let h = 12.0 / n as f64;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = -6.0 + (i as f64 + 0.5) * h;
            let y = -6.0 + (j as f64 + 0.5) * h;
            s += p.eval(&[x, y, t]);
        }
    }
    assert!(rel(p.radon(t, &theta), s * h * h) < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn radon_mass_equals_integral(a in 0.3f64..4.0) {
        let g = grid(12, 24);
        let opts = RnOptions::with_grid(g.clone());
        let phi = catalog::gaussian(a, &g).unwrap();
        let s = radon_transform(&phi, RadonRoute::Polar, &opts).unwrap();
        let want = (PI / a).powf(1.5);
        for m in s.masses() {
            prop_assert!(rel(m, want) < 1e-8);
        }
        prop_assert!(s.mass_spread() < 1e-8);
    }

    #[test]
    fn certificates_are_scale_invariant(c in 0.1f64..10.0) {
        let g = grid(12, 24);
        let opts = RnOptions::with_grid(g.clone());
        let e = ex("exp-ell", &g);
        prop_assert!(certify_intersection_function(&e.f.scaled(c), &opts).unwrap().is_intersection_function());
    }
}
