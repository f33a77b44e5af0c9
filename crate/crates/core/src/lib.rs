//! Numerical core for comparison problems of Radon transforms.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised by subsystem:
//!
//! - [`sphere`]: Gauss–Legendre × uniform grids on S², real spherical-harmonic
//!   analysis/synthesis and L^p norms.
//! - [`homogeneous`]: per-degree Fourier multipliers of homogeneous
//!   extensions `f·r^{-p}` and positive-definiteness certificates.
//! - [`spherical_radon`]: the spherical Radon (Funk) transform, comparison
//!   verifier, counterexample constructor, slicing check and intersection
//!   bodies.
//! - [`radial`] / [`radon`]: separable functions on R³, the classical Radon
//!   transform, Fourier-slice machinery and intersection-function tests.
//! - [`catalog`]: closed-form example families (Gaussian, erf-type,
//!   exponential, Cauchy, `γ_q`) and mollified indicators.
//! - [`comparison_rn`]: L^p norms on R³ and the classical comparison verifier
//!   and counterexample synthesizer.
//!
//! All numerics run in three ambient dimensions. Multiplier formulas accept a
//! general dimension `n`.
//!
//! Enable the `parallel` feature to spread per-direction and per-shell loops
//! over a rayon pool. Results are bit-identical with and without it.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod catalog;
pub mod comparison_rn;
mod error;
pub mod homogeneous;
mod par;
pub mod quad;
pub mod radial;
pub mod radon;
pub mod special;
pub mod sphere;
pub mod spherical_radon;

pub use error::{Error, Result};

/// Ambient dimension of every grid-based engine in this crate.
pub const DIM: usize = 3;

/// A point or direction in R³.
pub type Vec3 = [f64; 3];

/// A shared real-valued evaluator on R³ or S².
pub type PointFn = alloc::sync::Arc<dyn Fn(&Vec3) -> f64 + Send + Sync>;

#[inline]
pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn normalize(v: Vec3) -> Vec3 {
    #[allow(unused_imports)] // inherent float methods exist only with std
    use num_traits::Float;
    let n = dot(&v, &v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Two unit vectors completing `u` to a right-handed orthonormal frame.
pub(crate) fn orthonormal_frame(u: &Vec3) -> (Vec3, Vec3) {
    let helper = if u[0].abs() < 0.6 {
        [1.0, 0.0, 0.0]
    } else if u[1].abs() < 0.6 {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let d = dot(u, &helper);
    let e1 = normalize([
        helper[0] - d * u[0],
        helper[1] - d * u[1],
        helper[2] - d * u[2],
    ]);
    let e2 = [
        u[1] * e1[2] - u[2] * e1[1],
        u[2] * e1[0] - u[0] * e1[2],
        u[0] * e1[1] - u[1] * e1[0],
    ];
    (e1, e2)
}


pub(crate) fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub(crate) fn min_with_index(values: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best
}
