//! Fourier transforms of homogeneous extensions `f·r^{-p}` and
//! positive-definiteness certificates.
//!
//! For an even spherical harmonic `Y` of degree `k` on S^{n-1},
//! `(Y·r^{-p})^∧ = λ(n,k,p)·Y·r^{-n+p}` with
//! `λ(n,k,p) = (-1)^{k/2} π^{n/2} 2^{n-p} Γ((k+n-p)/2) / Γ((k+p)/2)`.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::sphere::{analyze, polish_extremum, synthesize, HarmonicSpectrum, SphericalFunction};
use crate::special::{legendre_at_zero, ln_gamma};
use crate::{Error, Result, Vec3};

/// Default negativity threshold relative to `max|h|`.
pub const PD_REL_TOL: f64 = 1e-9;

/// The multiplier `λ(n,k,p)` for even `k` and `0 < p < n`.
pub fn multiplier(n: usize, k: usize, p: f64) -> Result<f64> {
    let nf = n as f64;
    if n < 2 {
        return Err(Error::OutOfRange("dimension must be at least 2"));
    }
    if !(p > 0.0 && p < nf) {
        return Err(Error::OutOfRange("p must lie in (0, n)"));
    }
    if k % 2 == 1 {
        return Err(Error::OutOfRange("multipliers are defined for even degrees"));
    }
    let kf = k as f64;
    let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let log_mag = 0.5 * nf * PI.ln() + (nf - p) * 2.0_f64.ln() + ln_gamma(0.5 * (kf + nf - p))
        - ln_gamma(0.5 * (kf + p));
    Ok(sign * log_mag.exp())
}

/// Funk–Hecke eigenvalue of the spherical Radon transform on S²:
/// `c_{3,k} = 2π P_k(0)`.
pub fn funk_eigenvalue(k: usize) -> f64 {
    2.0 * PI * legendre_at_zero(k)
}

/// Per-degree multipliers for a fixed dimension and set of exponents.
#[derive(Debug, Clone)]
pub struct MultiplierTable {
    pub n: usize,
    pub l_max: usize,
    pub exponents: Vec<f64>,
    /// `lambda[i][k]` = `λ(n, k, exponents[i])`, zero at odd `k`.
    pub lambda: Vec<Vec<f64>>,
    /// Spherical Radon eigenvalues `c_{n,k}`, zero at odd `k`.
    pub funk: Vec<f64>,
}

impl MultiplierTable {
    pub fn new(n: usize, l_max: usize, exponents: &[f64]) -> Result<Self> {
        let mut lambda = Vec::with_capacity(exponents.len());
        for &p in exponents {
            let mut row = Vec::with_capacity(l_max + 1);
            for k in 0..=l_max {
                row.push(if k % 2 == 0 { multiplier(n, k, p)? } else { 0.0 });
            }
            lambda.push(row);
        }
        let funk = (0..=l_max)
            .map(|k| {
                if k % 2 == 1 {
                    Ok(0.0)
                } else if n == 3 {
                    Ok(funk_eigenvalue(k))
                } else {
                    multiplier(n, k, n as f64 - 1.0).map(|v| v / PI)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiplierTable {
            n,
            l_max,
            exponents: exponents.to_vec(),
            lambda,
            funk,
        })
    }

    /// `λ(n, k, p)` for a tabulated exponent.
    pub fn get(&self, k: usize, p: f64) -> Option<f64> {
        let i = self.exponents.iter().position(|&q| q == p)?;
        self.lambda[i].get(k).copied()
    }
}

/// Spectrum of `g` where `(f·r^{-p})^∧ = g·r^{-3+p}`.
pub fn fourier_homogeneous(f: &HarmonicSpectrum, p: f64) -> Result<HarmonicSpectrum> {
    fourier_homogeneous_n(f, p, crate::DIM)
}

/// As [`fourier_homogeneous`] for a general ambient dimension `n`.
pub fn fourier_homogeneous_n(f: &HarmonicSpectrum, p: f64, n: usize) -> Result<HarmonicSpectrum> {
    if !f.is_even() {
        return Err(Error::ParityViolation {
            max_odd: f.max_odd(),
        });
    }
    let table = (0..=f.l_max)
        .map(|k| if k % 2 == 0 { multiplier(n, k, p) } else { Ok(0.0) })
        .collect::<Result<Vec<_>>>()?;
    Ok(f.map_degrees(|k| table[k]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    PositiveDefinite,
    NotPositiveDefinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WitnessPoint {
    /// Grid node nearest the minimum and the refined minimiser.
    Sphere { node: usize, point: Vec3 },
    /// A frequency `t` of the one-dimensional transform along `direction`.
    Frequency { t: f64, direction: Vec3 },
}

#[derive(Debug, Clone)]
pub struct PDCertificate {
    pub verdict: Verdict,
    /// Set when the minimum lies within `±tolerance` of zero.
    pub inconclusive: bool,
    pub witness_point: WitnessPoint,
    pub witness_value: f64,
    /// Absolute negativity threshold.
    pub tolerance: f64,
    /// The transformed samples the verdict was read from.
    pub transform_data: Vec<f64>,
    /// Relative sup-norm error of the band-limited power, when one was formed.
    pub truncation_residual: Option<f64>,
    /// Spectrum of the transformed function, for sphere certificates.
    pub spectrum: Option<HarmonicSpectrum>,
}

impl PDCertificate {
    pub fn is_positive_definite(&self) -> bool {
        self.verdict == Verdict::PositiveDefinite
    }

    /// Build a certificate from transformed samples.
    pub(crate) fn from_samples(
        values: Vec<f64>,
        rel_tol: f64,
        locate: impl Fn(usize) -> WitnessPoint,
    ) -> Self {
        let (i, min) = crate::min_with_index(&values);
        let tol = rel_tol * crate::max_abs(&values);
        let verdict = if min < -tol {
            Verdict::NotPositiveDefinite
        } else {
            Verdict::PositiveDefinite
        };
        PDCertificate {
            verdict,
            inconclusive: min.abs() <= tol,
            witness_point: locate(i),
            witness_value: min,
            tolerance: tol,
            transform_data: values,
            truncation_residual: None,
            spectrum: None,
        }
    }
}

/// Certify positive definiteness of `f^q·r^{-1}` on R³.
///
/// `l_max` is the degree of `f`; the power is analysed at `min(2·l_max,
/// bandwidth)`.
pub fn certify_pd_r1(f: &SphericalFunction, q: f64, l_max: usize) -> Result<PDCertificate> {
    certify_pd_r1_with(f, q, l_max, PD_REL_TOL)
}

pub fn certify_pd_r1_with(
    f: &SphericalFunction,
    q: f64,
    l_max: usize,
    rel_tol: f64,
) -> Result<PDCertificate> {
    let min = f.min();
    if !(min > 0.0) {
        return Err(Error::NotPositive { min });
    }
    let grid = &f.grid;
    let l_pow = (2 * l_max).min(grid.bandwidth());
    let power = f.powf(q);
    let spec = analyze(&power, l_pow)?.even_part();
    let back = synthesize(&spec, grid);
    let truncation = power
        .values
        .iter()
        .zip(&back.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / power.max_abs();
    let h_spec = fourier_homogeneous(&spec, 1.0)?;
    let h = synthesize(&h_spec, grid);
    let nodes = grid.nodes();
    let mut cert = PDCertificate::from_samples(h.values, rel_tol, |i| WitnessPoint::Sphere {
        node: i,
        point: nodes[i],
    });
    // the grid minimum can miss the true one between nodes
    if let WitnessPoint::Sphere { node, point } = cert.witness_point {
        let (u, v) = polish_extremum(&h_spec, point, -1.0);
        if v < cert.witness_value {
            cert.witness_point = WitnessPoint::Sphere { node, point: u };
            cert.witness_value = v;
            cert.inconclusive = v.abs() <= cert.tolerance;
            if v < -cert.tolerance {
                cert.verdict = Verdict::NotPositiveDefinite;
            }
        }
    }
    cert.truncation_residual = Some(truncation);
    cert.spectrum = Some(h_spec);
    Ok(cert)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParsevalCheck {
    /// `|∫ F G − (2π)³ ∫ f g|` relative to the larger side.
    pub residual: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// True when odd-degree content was present and discarded.
    pub odd_part_removed: bool,
}

/// Check `∫ (f·r^{-p})^∧ (g·r^{-3+p})^∧ = (2π)³ ∫ f g` on the sphere. The left
/// side is computed spectrally, the right side by grid quadrature.
pub fn spherical_parseval_check(
    f: &SphericalFunction,
    g: &SphericalFunction,
    p: f64,
    l_max: usize,
) -> Result<ParsevalCheck> {
    let fs = analyze(f, l_max)?;
    let gs = analyze(g, l_max)?;
    let odd = !(fs.is_even() && gs.is_even());
    let (fs, gs) = (fs.even_part(), gs.even_part());
    let lhs = fourier_homogeneous(&fs, p)?.inner(&fourier_homogeneous(&gs, 3.0 - p)?);
    let (fe, ge) = if odd {
        (
            synthesize(&fs, &f.grid).values,
            synthesize(&gs, &g.grid).values,
        )
    } else {
        (f.values.clone(), g.values.clone())
    };
    let prod: Vec<f64> = fe.iter().zip(&ge).map(|(a, b)| a * b).collect();
    let rhs = (2.0 * PI).powi(3) * f.grid.integrate(&prod);
    let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    Ok(ParsevalCheck {
        residual: (lhs - rhs).abs() / scale,
        lhs,
        rhs,
        odd_part_removed: odd,
    })
}
