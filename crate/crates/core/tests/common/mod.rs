#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radoncomp_core::sphere::{build_grid, synthesize, HarmonicSpectrum, SphereGrid, SphericalFunction};

pub fn grid(np: usize, na: usize) -> Arc<SphereGrid> {
    Arc::new(build_grid(np, na).unwrap())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random spectrum up to `l_max`; only even degrees when `even`.
pub fn random_spectrum<R: Rng>(rng: &mut R, l_max: usize, even: bool) -> HarmonicSpectrum {
    let mut s = HarmonicSpectrum::zeros(l_max);
    for k in 0..=l_max {
        if even && k % 2 == 1 {
            continue;
        }
        for m in -(k as i64)..=(k as i64) {
            s.set(k, m, rng.gen_range(-1.0..1.0));
        }
    }
    s
}

/// Even function `c + Σ a_{k,m} Y_{k,m}` with the non-constant part scaled so
/// that its sup norm is `amp` (degrees 2..=l_max).
pub fn random_positive_even<R: Rng>(
    rng: &mut R,
    grid: &Arc<SphereGrid>,
    l_max: usize,
    c: f64,
    amp: f64,
) -> SphericalFunction {
    let mut s = random_spectrum(rng, l_max, true);
    s.coeffs[0] = 0.0;
    let v = synthesize(&s, grid);
    let scale = amp / v.max_abs();
    let mut s = s.scale(scale);
    s.coeffs[0] = c * (4.0 * std::f64::consts::PI).sqrt();
    synthesize(&s, grid)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// A random pair `(f, g)` with `Rf ≤ Rg` by construction and a certified
/// hypothesis for exponent `p`, or `None` when certification fails.
pub fn certified_pair<R: Rng>(
    rng: &mut R,
    grid: &Arc<SphereGrid>,
    p: f64,
    l_max: usize,
) -> Option<(SphericalFunction, SphericalFunction)> {
    use radoncomp_core::homogeneous::certify_pd_r1;
    use radoncomp_core::sphere::analyze;
    use radoncomp_core::spherical_radon::sradon_spectral;

    let amp = rng.gen_range(0.05..0.3);
    let base = random_positive_even(rng, grid, l_max, 1.0, amp);
    if !certify_pd_r1(&base, p - 1.0, l_max).ok()?.is_positive_definite() {
        return None;
    }
    let amp = rng.gen_range(0.0..0.2);
    let delta = random_positive_even(rng, grid, l_max, 0.0, amp);
    let r_delta = synthesize(&sradon_spectral(&analyze(&delta, l_max).ok()?).ok()?, grid);
    let two_pi = 2.0 * std::f64::consts::PI;
    if p > 1.0 {
        // f is the certified one, g = f + δ + κ
        let kappa = (-r_delta.min()).max(0.0) / two_pi + rng.gen_range(0.0..0.05);
        let g = SphericalFunction::new(
            grid.clone(),
            base.values.iter().zip(&delta.values).map(|(a, d)| a + d + kappa).collect(),
        );
        (g.min() > 0.0).then_some((base, g))
    } else {
        // g is the certified one, f = g − δ − κ
        let kappa = (-r_delta.min()).max(0.0) / two_pi + rng.gen_range(0.0..0.05);
        let f = SphericalFunction::new(
            grid.clone(),
            base.values.iter().zip(&delta.values).map(|(a, d)| a - d - kappa).collect(),
        );
        (f.min() > 0.0).then_some((f, base))
    }
}
