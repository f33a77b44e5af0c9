mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use radoncomp_core::homogeneous::*;
use radoncomp_core::sphere::*;
use radoncomp_core::Error;

/// P_k(0) from its closed form `(-1)^{k/2} k! / (2^k ((k/2)!)²)`.
fn legendre_zero_oracle(k: usize) -> f64 {
    let h = k / 2;
    let mut v = 1.0;
    for j in 1..=h {
        v *= (2 * j - 1) as f64 / (2 * j) as f64;
    }
    if h % 2 == 1 {
        -v
    } else {
        v
    }
}

fn legendre(k: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if k == 0 {
        return 1.0;
    }
    for n in 1..k {
        let p2 = ((2 * n + 1) as f64 * x * p1 - n as f64 * p0) / (n + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

#[test]
fn low_degree_multipliers() {
    assert!(rel(multiplier(3, 0, 1.0).unwrap(), 4.0 * PI) < 1e-14);
    assert!(rel(multiplier(3, 0, 2.0).unwrap(), 2.0 * PI * PI) < 1e-14);
    assert!(rel(multiplier(3, 2, 2.0).unwrap(), -PI * PI) < 1e-14);
    assert!(rel(multiplier(3, 2, 1.0).unwrap(), -8.0 * PI) < 1e-14);
}

#[test]
fn multiplier_domain_is_enforced() {
    assert!(matches!(multiplier(3, 2, 0.0), Err(Error::OutOfRange(_))));
    assert!(matches!(multiplier(3, 2, 3.0), Err(Error::OutOfRange(_))));
    assert!(matches!(multiplier(3, 3, 1.0), Err(Error::OutOfRange(_))));
}

#[test]
fn multiplier_duality_product() {
    let want = (2.0 * PI).powi(3);
    for k in (0..=64).step_by(2) {
        for &p in &[0.5, 1.0, 1.5, 2.0, 2.5] {
            let v = multiplier(3, k, p).unwrap() * multiplier(3, k, 3.0 - p).unwrap();
            assert!(rel(v, want) < 1e-10, "k={k} p={p}");
        }
    }
}

#[test]
fn section_multiplier_matches_funk_eigenvalue() {
    for k in (0..=64).step_by(2) {
        let c = funk_eigenvalue(k);
        assert!(rel(c, 2.0 * PI * legendre_zero_oracle(k)) < 1e-12, "k={k}");
        assert!(rel(multiplier(3, k, 2.0).unwrap(), PI * c) < 1e-10, "k={k}");
    }
}

#[test]
fn funk_eigenvalue_by_great_circle_quadrature() {
    // R(P_k(u·e)) at ξ equals c_k·P_k(ξ·e); integrate the circle ⊥ ξ directly
    let e = [0.0, 0.0, 1.0];
    let xi = [0.6f64.sin(), 0.0, 0.6f64.cos()];
    let a = [xi[2], 0.0, -xi[0]];
    let b = [0.0, 1.0, 0.0];
    let n = 4096;
    for k in (0..=64).step_by(2) {
        let mut s = 0.0;
        for j in 0..n {
            let t = 2.0 * PI * j as f64 / n as f64;
            let z = t.cos() * a[2] + t.sin() * b[2];
            s += legendre(k, z * e[2]);
        }
        s *= 2.0 * PI / n as f64;
        let c = s / legendre(k, xi[2]);
        assert!((c - funk_eigenvalue(k)).abs() < 1e-8, "k={k}");
    }
}

#[test]
fn multiplier_table_matches_pointwise() {
    let t = MultiplierTable::new(3, 10, &[1.0, 2.0]).unwrap();
    assert_eq!(t.get(4, 2.0), Some(multiplier(3, 4, 2.0).unwrap()));
    assert_eq!(t.get(3, 1.0), Some(0.0));
    assert_eq!(t.get(4, 1.5), None);
    assert!(rel(t.funk[2], -PI) < 1e-14);
}

#[test]
fn higher_dimensional_multipliers() {
    // λ(n,0,p) = π^{n/2} 2^{n-p} Γ((n-p)/2)/Γ(p/2); at n = 4, p = 2 this is 4π²
    assert!(rel(multiplier(4, 0, 2.0).unwrap(), 4.0 * PI * PI) < 1e-13);
    let t = MultiplierTable::new(4, 4, &[1.0]).unwrap();
    // the section eigenvalue on S³ at degree 0 is the area of S², 4π
    assert!(rel(t.funk[0], 4.0 * PI) < 1e-13);
}

#[test]
fn constant_is_positive_definite() {
    let g = grid(16, 32);
    let c = certify_pd_r1(&SphericalFunction::constant(&g, 1.0), 1.0, 8).unwrap();
    assert!(c.is_positive_definite());
    assert!(rel(c.witness_value, 4.0 * PI) < 1e-12);
    assert!(c.truncation_residual.unwrap() < 1e-12);
}

fn p2_family(g: &std::sync::Arc<SphereGrid>, a: f64) -> SphericalFunction {
    SphericalFunction::from_fn(g, move |u| 1.0 + a * 0.5 * (3.0 * u[2] * u[2] - 1.0))
}

#[test]
fn p2_family_transform_is_explicit() {
    let g = grid(16, 32);
    let a = 0.3;
    let c = certify_pd_r1(&p2_family(&g, a), 1.0, 8).unwrap();
    let h = synthesize(c.spectrum.as_ref().unwrap(), &g);
    for (u, v) in g.nodes().iter().zip(&h.values) {
        let want = 4.0 * PI - 8.0 * PI * a * 0.5 * (3.0 * u[2] * u[2] - 1.0);
        assert!((v - want).abs() < 1e-11);
    }
}

#[test]
fn sign_flip_threshold_by_bisection() {
    let g = grid(16, 32);
    let pd = |a: f64| certify_pd_r1(&p2_family(&g, a), 1.0, 8).unwrap().is_positive_definite();
    let (mut lo, mut hi) = (0.0, 0.9);
    assert!(pd(lo) && !pd(hi));
    while hi - lo > 1e-7 {
        let m = 0.5 * (lo + hi);
        if pd(m) {
            lo = m
        } else {
            hi = m
        }
    }
    assert!((0.5 * (lo + hi) - 0.5).abs() < 1e-6);
    // for negative a the minimum sits on the equator and the threshold is −1
    assert!(pd(-0.99) && !pd(-1.01));
}

#[test]
fn non_positive_input_is_rejected() {
    let g = grid(8, 16);
    let f = SphericalFunction::from_fn(&g, |u| u[2] * u[2] - 0.1);
    assert!(matches!(certify_pd_r1(&f, 1.0, 4), Err(Error::NotPositive { .. })));
}

#[test]
fn witness_sits_at_the_pole_for_large_a() {
    let g = grid(16, 32);
    let c = certify_pd_r1(&p2_family(&g, 0.8), 1.0, 8).unwrap();
    assert!(!c.is_positive_definite());
    match c.witness_point {
        WitnessPoint::Sphere { point, .. } => assert!(point[2].abs() > 0.95),
        _ => panic!("expected a sphere witness"),
    }
    assert!(rel(c.witness_value, 4.0 * PI - 8.0 * PI * 0.8) < 1e-9);
}

#[test]
fn parseval_on_constants_and_odd_inputs() {
    let g = grid(16, 32);
    let one = SphericalFunction::constant(&g, 1.0);
    let r = spherical_parseval_check(&one, &one, 1.0, 8).unwrap();
    assert!(r.residual < 1e-12 && !r.odd_part_removed);
    let odd = SphericalFunction::from_fn(&g, |u| 1.0 + 0.3 * u[2]);
    let r = spherical_parseval_check(&odd, &one, 1.0, 8).unwrap();
    assert!(r.odd_part_removed && r.residual < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn duality_holds_for_random_exponents(k in (0usize..40).prop_map(|k| 2 * k), p in 0.05f64..2.95) {
        let v = multiplier(3, k, p).unwrap() * multiplier(3, k, 3.0 - p).unwrap();
        prop_assert!(rel(v, (2.0 * PI).powi(3)) < 1e-10);
    }

    #[test]
    fn parseval_holds_for_random_even_pairs(seed in any::<u64>(), p in 0.2f64..2.8) {
        let g = grid(16, 32);
        let mut r = rng(seed);
        let f = synthesize(&random_spectrum(&mut r, 12, true), &g);
        let h = synthesize(&random_spectrum(&mut r, 12, true), &g);
        let c = spherical_parseval_check(&f, &h, p, 12).unwrap();
        let scale = c.lhs.abs().max(c.rhs.abs()).max(1e-12);
        prop_assert!(c.residual <= 1e-9 * scale.max(1.0));
    }

    #[test]
    fn transform_twice_is_a_scalar(seed in any::<u64>(), p in 0.2f64..2.8) {
        let s = random_spectrum(&mut rng(seed), 10, true);
        let twice = fourier_homogeneous(&fourier_homogeneous(&s, p).unwrap(), 3.0 - p).unwrap();
        let c = (2.0 * PI).powi(3);
        for (a, b) in s.coeffs.iter().zip(&twice.coeffs) {
            prop_assert!((c * a - b).abs() < 1e-9 * c);
        }
    }

    #[test]
    fn certificate_is_scale_invariant(seed in any::<u64>(), c in 0.1f64..10.0) {
        let g = grid(12, 24);
        let f = random_positive_even(&mut rng(seed), &g, 6, 1.0, 0.8);
        let a = certify_pd_r1(&f, 1.0, 6).unwrap();
        let b = certify_pd_r1(&f.map(|v| c * v), 1.0, 6).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!(rel(b.witness_value, c * a.witness_value) < 1e-9);
    }
}
