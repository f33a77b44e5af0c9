//! The spherical Radon transform on S² and the comparison pipelines built on it.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::homogeneous::{
    certify_pd_r1_with, fourier_homogeneous, funk_eigenvalue, PDCertificate, PD_REL_TOL,
};
use crate::quad::adaptive;
use crate::radial::SeparableFunction;
use crate::sphere::{
    analyze, lp_norm_sphere, polish_extremum, synthesize, HarmonicSpectrum, SphereGrid, SphericalFunction,
};
use crate::{dot, normalize, orthonormal_frame, par, Error, PointFn, Result, Vec3};

/// `R Y = c_{3,k} Y` with `Rφ = 8π² ψ` when `φ·r^{-2}` is the transform of `ψ·r^{-1}`.
const R_OF_PHI: f64 = 8.0 * PI * PI;

/// Great-circle integral of `f` over `S² ∩ ξ^⊥` by an `n`-point trapezoid rule.
pub fn sradon_direct_fn<F: Fn(&Vec3) -> f64>(f: F, xi: &Vec3, n: usize) -> f64 {
    let xi = normalize(*xi);
    let (e1, e2) = orthonormal_frame(&xi);
    let h = 2.0 * PI / n as f64;
    let mut s = 0.0;
    for j in 0..n {
        let (sn, cs) = (h * j as f64).sin_cos();
        let u = [
            cs * e1[0] + sn * e2[0],
            cs * e1[1] + sn * e2[1],
            cs * e1[2] + sn * e2[2],
        ];
        s += f(&u);
    }
    s * h
}

/// Great-circle integral of a band-limited function given by its spectrum.
pub fn sradon_direct_spectrum(f: &HarmonicSpectrum, xi: &Vec3) -> f64 {
    sradon_direct_fn(|u| f.eval(u), xi, 2 * f.l_max + 8)
}

/// Great-circle integral of a grid function; evaluated through its spectrum
/// (attached, or analysed at the grid bandwidth).
pub fn sradon_direct(f: &SphericalFunction, xi: &Vec3) -> Result<f64> {
    let spec = match &f.spectrum {
        Some(s) => s.clone(),
        None => analyze(f, f.grid.bandwidth())?,
    };
    Ok(sradon_direct_spectrum(&spec, xi))
}

/// `(Rf)_{k,m} = c_{3,k} f_{k,m}`.
pub fn sradon_spectral(f: &HarmonicSpectrum) -> Result<HarmonicSpectrum> {
    if !f.is_even() {
        return Err(Error::ParityViolation {
            max_odd: f.max_odd(),
        });
    }
    Ok(f.map_degrees(funk_eigenvalue))
}

/// `Rf` on the grid of `f`, through the degree-`l_max` spectrum.
pub fn sradon_grid(f: &SphericalFunction, l_max: usize) -> Result<SphericalFunction> {
    let s = f.spectrum_at(l_max)?.even_part();
    Ok(synthesize(&sradon_spectral(&s)?, &f.grid))
}

/// Tolerances and degree caps for the spherical pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalOptions {
    pub l_max: usize,
    pub pd_rel_tol: f64,
    /// Domination slack relative to `max|Rg|`.
    pub domination_rel_tol: f64,
    /// Absolute slack for norm comparisons.
    pub norm_tol: f64,
    /// Minimum norm gap a constructed counterexample must reach.
    pub min_norm_gap: f64,
}

impl Default for SphericalOptions {
    fn default() -> Self {
        SphericalOptions {
            l_max: 32,
            pd_rel_tol: PD_REL_TOL,
            domination_rel_tol: 1e-9,
            norm_tol: 1e-9,
            min_norm_gap: 1e-8,
        }
    }
}

/// Numerical replay of the proof chain of the comparison theorem.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProofChain {
    /// p > 1: `∫f^p`; 0 < p < 1: `∫g^{p-1} f`.
    pub pairing_lhs: f64,
    /// p > 1: `∫f^{p-1} g`; 0 < p < 1: `∫g^p`.
    pub pairing_rhs: f64,
    /// p > 1: `‖f‖_p^{p-1}‖g‖_p`; 0 < p < 1: `‖f‖_p (∫g^p)^{(p-1)/p}`.
    pub holder_bound: f64,
    /// Relative mismatch between the spectral and grid values of the pairing.
    pub parseval_residual: f64,
    /// `|∫Rf − 2π∫f|` relative, from the p = 1 identity.
    pub fubini_residual: f64,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub p: f64,
    /// `min (Rg − Rf)` over the grid.
    pub domination_margin: f64,
    pub domination_tolerance: f64,
    pub pd_certificate: Option<PDCertificate>,
    pub hypothesis_holds: bool,
    pub lp_f: f64,
    pub lp_g: f64,
    /// `‖f‖_p − ‖g‖_p`.
    pub norm_gap: f64,
    /// `‖f‖_p ≤ ‖g‖_p + tol`.
    pub conclusion_holds: bool,
    pub chain: ProofChain,
}

impl ComparisonReport {
    /// True when the hypothesis was certified yet the conclusion failed.
    pub fn is_violation(&self) -> bool {
        self.hypothesis_holds && !self.conclusion_holds
    }
}

fn check_input(f: &SphericalFunction, l_max: usize) -> Result<HarmonicSpectrum> {
    let min = f.min();
    if !(min > 0.0) {
        return Err(Error::NotPositive { min });
    }
    let s = f.spectrum_at(l_max)?;
    if !s.is_even() {
        return Err(Error::ParityViolation {
            max_odd: s.max_odd(),
        });
    }
    Ok(s)
}

fn weighted_integral(grid: &SphereGrid, a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(grid.weights())
        .map(|((x, y), w)| w * x * y)
        .sum()
}

/// Verify the spherical comparison theorem on a concrete pair `(f, g)`.
pub fn verify_comparison_spherical(
    f: &SphericalFunction,
    g: &SphericalFunction,
    p: f64,
    opts: &SphericalOptions,
) -> Result<ComparisonReport> {
    if !(p > 0.0) {
        return Err(Error::OutOfRange("p must be positive"));
    }
    let l = opts.l_max;
    let fs = check_input(f, l)?;
    let gs = check_input(g, l)?;
    let grid = &f.grid;
    let rf = synthesize(&sradon_spectral(&fs)?, grid);
    let rg = synthesize(&sradon_spectral(&gs)?, grid);
    let diff: Vec<f64> = rg.values.iter().zip(&rf.values).map(|(a, b)| a - b).collect();
    let margin = diff.iter().copied().fold(f64::INFINITY, f64::min);
    let dom_tol = opts.domination_rel_tol * rg.max_abs();
    if margin < -dom_tol {
        return Err(Error::DominationFails { margin });
    }
    let lp_f = lp_norm_sphere(f, p);
    let lp_g = lp_norm_sphere(g, p);
    let mut chain = ProofChain {
        fubini_residual: {
            let lhs = rf.integral();
            let rhs = 2.0 * PI * f.integral();
            (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE)
        },
        ..ProofChain::default()
    };
    let cert = if p == 1.0 {
        None
    } else {
        let base = if p > 1.0 { f } else { g };
        let cert = certify_pd_r1_with(base, p - 1.0, l, opts.pd_rel_tol)?;
        let pow = base.powf(p - 1.0);
        // ∫ base^{p-1} f through the Parseval identity with exponents 1 and 2
        let h = cert.spectrum.as_ref().expect("sphere certificate carries its spectrum");
        let spectral =
            h.inner(&fourier_homogeneous(&fs.resized(h.l_max), 2.0)?) / (2.0 * PI).powi(3);
        let grid_pairing = weighted_integral(grid, &pow.values, &f.values);
        chain.parseval_residual =
            (spectral - grid_pairing).abs() / grid_pairing.abs().max(f64::MIN_POSITIVE);
        if p > 1.0 {
            chain.pairing_lhs = weighted_integral(grid, &pow.values, &f.values);
            chain.pairing_rhs = weighted_integral(grid, &pow.values, &g.values);
            chain.holder_bound = lp_f.powf(p - 1.0) * lp_g;
        } else {
            chain.pairing_lhs = grid_pairing;
            chain.pairing_rhs = lp_g.powf(p);
            chain.holder_bound = lp_f * lp_g.powf(p - 1.0);
        }
        Some(cert)
    };
    let hypothesis_holds = cert.as_ref().map_or(true, |c| c.is_positive_definite());
    Ok(ComparisonReport {
        p,
        domination_margin: margin,
        domination_tolerance: dom_tol,
        pd_certificate: cert,
        hypothesis_holds,
        lp_f,
        lp_g,
        norm_gap: lp_f - lp_g,
        conclusion_holds: lp_f <= lp_g + opts.norm_tol,
        chain,
    })
}

/// How the non-negative bump `ψ` was formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bump {
    /// `max(0, −h − δ)³` re-expanded; `lift` is the constant added to clear
    /// ringing below zero.
    Cubic { delta: f64, lift: f64 },
    /// `((u·ν)²)^N` around the witness direction `ν`.
    Power { exponent: usize, center: Vec3 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// p > 1: `f = g − εφ`.
    Upper,
    /// 0 < p < 1: `g = f + εφ`.
    Lower,
}

#[derive(Debug, Clone)]
pub struct SphericalCounterexample {
    pub f: SphericalFunction,
    pub g: SphericalFunction,
    pub p: f64,
    pub branch: Branch,
    pub certificate: PDCertificate,
    pub bump: Bump,
    /// Constant added to the bump so that `Rg − Rf` stays positive.
    pub floor: f64,
    /// `∫ h ψ`, negative by construction.
    pub pairing_gain: f64,
    pub epsilon: f64,
    pub halvings: usize,
    /// `min (Rg − Rf)` recomputed from the spectra of `f` and `g`.
    pub domination_margin: f64,
    pub domination_tolerance: f64,
    /// `max |Rφ − 8π²ψ| / max |8π²ψ|`.
    pub identity_residual: f64,
    /// Minimum of the constructed (perturbed) function.
    pub min_constructed: f64,
    pub lp_f: f64,
    pub lp_g: f64,
    /// `‖f‖_p − ‖g‖_p`, positive on success.
    pub norm_gap: f64,
}

/// Build a non-negative band-limited bump concentrated where `h < −δ`.
fn spherical_bump(
    h: &SphericalFunction,
    h_spec: &HarmonicSpectrum,
    witness: Vec3,
    l_max: usize,
) -> Result<(HarmonicSpectrum, Bump, f64)> {
    let grid = &h.grid;
    let min_h = h.min();
    let delta = 0.1 * min_h.abs();
    let raw = h.map(|v| (-v - delta).max(0.0).powi(3));
    let mut spec = analyze(&raw, l_max)?.even_part();
    let smin = crate::sphere::synthesize_values(&spec, grid)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let smax = raw.max_abs();
    let lift = if smin < -1e-12 * smax { -smin } else { 0.0 };
    spec.coeffs[0] += lift * (4.0 * PI).sqrt();
    let gain = h_spec.inner(&spec.resized(h_spec.l_max));
    if gain < 0.0 {
        return Ok((spec, Bump::Cubic { delta, lift }, gain));
    }
    // ringing ate the gain: fall back to a polynomial cap at the witness
    let mut best: Option<(HarmonicSpectrum, Bump, f64)> = None;
    let mut n = 1;
    while 2 * n <= l_max {
        let cap = SphericalFunction::from_fn(grid, |u| dot(u, &witness).powi(2).powi(n as i32));
        let s = analyze(&cap, l_max)?.even_part();
        let scale = s.max_abs().max(f64::MIN_POSITIVE);
        let gain = h_spec.inner(&s.resized(h_spec.l_max)) / scale;
        if gain < 0.0 && best.as_ref().map_or(true, |b| gain < b.2) {
            best = Some((
                s.scale(1.0 / scale),
                Bump::Power {
                    exponent: n,
                    center: witness,
                },
                gain,
            ));
        }
        n *= 2;
    }
    match best {
        Some((s, b, _)) => {
            let gain = h_spec.inner(&s.resized(h_spec.l_max));
            Ok((s, b, gain))
        }
        None => Err(Error::ConstructionFailed(String::from(
            "no non-negative band-limited bump pairs negatively with the transform",
        ))),
    }
}

/// Execute the construction of a counterexample to spherical comparison.
///
/// For `p > 1` the input is `g` and the output `f = g − εφ`; for `0 < p < 1`
/// the input is `f` and the output `g = f + εφ`. In both cases `Rf ≤ Rg` and
/// `‖f‖_p > ‖g‖_p`.
pub fn construct_counterexample_spherical(
    input: &SphericalFunction,
    p: f64,
    opts: &SphericalOptions,
) -> Result<SphericalCounterexample> {
    if !(p > 0.0) || p == 1.0 {
        return Err(Error::OutOfRange("p must be positive and different from 1"));
    }
    let branch = if p > 1.0 { Branch::Upper } else { Branch::Lower };
    let l = opts.l_max;
    check_input(input, l)?;
    let cert = certify_pd_r1_with(input, p - 1.0, l, opts.pd_rel_tol)?;
    if cert.is_positive_definite() {
        return Err(Error::NotApplicable(
            "the homogeneous power is positive definite, comparison holds",
        ));
    }
    let grid = &input.grid;
    let h_spec = cert.spectrum.clone().expect("sphere certificate carries its spectrum");
    let h = synthesize(&h_spec, grid);
    let witness = match cert.witness_point {
        crate::homogeneous::WitnessPoint::Sphere { point, .. } => point,
        crate::homogeneous::WitnessPoint::Frequency { direction, .. } => direction,
    };
    let (mut psi_spec, bump, mut gain) = spherical_bump(&h, &h_spec, witness, l)?;
    // a positive floor makes the domination strict; it spends at most half the gain
    let s4 = (4.0 * PI).sqrt();
    let h00 = h_spec.get(0, 0);
    let mut floor = 1e-3 * synthesize(&psi_spec, grid).max_abs();
    if h00 > 0.0 {
        floor = floor.min(-0.5 * gain / (s4 * h00));
    }
    psi_spec.coeffs[0] += floor * s4;
    gain += floor * s4 * h00;
    let psi = synthesize(&psi_spec, grid);
    let phi_spec = fourier_homogeneous(&psi_spec, 1.0)?;
    let phi = synthesize(&phi_spec, grid);
    let r_phi = synthesize(&sradon_spectral(&phi_spec)?, grid);
    let identity_residual = r_phi
        .values
        .iter()
        .zip(&psi.values)
        .map(|(a, b)| (a - R_OF_PHI * b).abs())
        .fold(0.0, f64::max)
        / (R_OF_PHI * psi.max_abs()).max(f64::MIN_POSITIVE);

    let l_check = grid.bandwidth();
    let input_full = analyze(input, l_check)?;
    let mut eps = 0.5 * input.min() / phi.max_abs();
    let mut last_gap = f64::NAN;
    for halvings in 0..=20 {
        let sign = if branch == Branch::Upper { -1.0 } else { 1.0 };
        let out = SphericalFunction::new(
            grid.clone(),
            input
                .values
                .iter()
                .zip(&phi.values)
                .map(|(a, b)| a + sign * eps * b)
                .collect(),
        );
        let min_out = out.min();
        if min_out > 0.0 {
            let (f, g) = match branch {
                Branch::Upper => (&out, input),
                Branch::Lower => (input, &out),
            };
            let out_full = analyze(&out, l_check)?;
            let (fs, gs) = match branch {
                Branch::Upper => (&out_full, &input_full),
                Branch::Lower => (&input_full, &out_full),
            };
            let rf = synthesize(&sradon_spectral(&fs.even_part())?, grid);
            let rg = synthesize(&sradon_spectral(&gs.even_part())?, grid);
            let margin = rg
                .values
                .iter()
                .zip(&rf.values)
                .map(|(a, b)| a - b)
                .fold(f64::INFINITY, f64::min);
            let dom_tol = opts.domination_rel_tol * rg.max_abs();
            let lp_f = lp_norm_sphere(f, p);
            let lp_g = lp_norm_sphere(g, p);
            last_gap = lp_f - lp_g;
            if margin >= -dom_tol && last_gap > opts.min_norm_gap {
                let mut out = out;
                out.spectrum = Some(out_full.resized(l.max(h_spec.l_max).min(l_check)));
                let (f, g) = match branch {
                    Branch::Upper => (out, input.clone()),
                    Branch::Lower => (input.clone(), out),
                };
                return Ok(SphericalCounterexample {
                    f,
                    g,
                    p,
                    branch,
                    certificate: cert,
                    bump,
                    floor,
                    pairing_gain: gain,
                    epsilon: eps,
                    halvings,
                    domination_margin: margin,
                    domination_tolerance: dom_tol,
                    identity_residual,
                    min_constructed: min_out,
                    lp_f,
                    lp_g,
                    norm_gap: last_gap,
                });
            }
        }
        eps *= 0.5;
    }
    Err(Error::ConstructionFailed(format!(
        "no admissible epsilon after 20 halvings (last epsilon {eps:e}, last norm gap {last_gap:e}, bump {bump:?})"
    )))
}

#[derive(Debug, Clone)]
pub struct SlicingReport {
    pub p: f64,
    /// `‖f‖_p`.
    pub lhs: f64,
    /// `(4π)^{1/p}/(2π) · max Rf` (or `min Rf` for the dual form).
    pub rhs: f64,
    /// Non-negative when the inequality holds.
    pub margin: f64,
    pub holds: bool,
    pub extremal_value: f64,
    pub extremal_direction: Vec3,
    pub certificate: PDCertificate,
    pub hypothesis_holds: bool,
    pub dual: bool,
}

/// Check `‖f‖_p ≤ (4π)^{1/p}/(2π) · max_ξ Rf(ξ)` for `p > 1`, or with
/// `dual` and `0 < p < 1`, `‖f‖_p ≥ (4π)^{1/p}/(2π) · min_ξ Rf(ξ)`.
pub fn slicing_check(
    f: &SphericalFunction,
    p: f64,
    dual: bool,
    opts: &SphericalOptions,
) -> Result<SlicingReport> {
    if dual && !(p > 0.0 && p < 1.0) {
        return Err(Error::OutOfRange("the dual slicing form needs 0 < p < 1"));
    }
    if !dual && !(p > 1.0) {
        return Err(Error::OutOfRange("slicing needs p > 1"));
    }
    let l = opts.l_max;
    let fs = check_input(f, l)?;
    let cert = certify_pd_r1_with(f, p - 1.0, l, opts.pd_rel_tol)?;
    let r_spec = sradon_spectral(&fs)?;
    let rf = synthesize(&r_spec, &f.grid);
    let sign = if dual { -1.0 } else { 1.0 };
    let (idx, _) = crate::min_with_index(&rf.values.iter().map(|v| -sign * v).collect::<Vec<_>>());
    let (dir, ext) = polish_extremum(&r_spec, f.grid.nodes()[idx], sign);
    let lhs = lp_norm_sphere(f, p);
    let rhs = (4.0 * PI).powf(1.0 / p) / (2.0 * PI) * ext;
    let margin = if dual { lhs - rhs } else { rhs - lhs };
    let tol = opts.norm_tol * lhs.abs().max(1.0);
    Ok(SlicingReport {
        p,
        lhs,
        rhs,
        margin,
        holds: margin >= -tol,
        extremal_value: ext,
        extremal_direction: dir,
        hypothesis_holds: cert.is_positive_definite(),
        certificate: cert,
        dual,
    })
}

/// An origin-symmetric star body given by its radial function.
#[derive(Clone)]
pub struct StarBody {
    pub name: String,
    pub radial: SphericalFunction,
    /// Exact radial function, when known in closed form.
    pub exact: Option<PointFn>,
}

impl core::fmt::Debug for StarBody {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("StarBody")
            .field("name", &self.name)
            .field("radial", &self.radial)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl StarBody {
    /// Wrap a strictly positive even radial function.
    pub fn new(name: &str, radial: SphericalFunction) -> Result<Self> {
        let min = radial.min();
        if !(min > 0.0) {
            return Err(Error::NotPositive { min });
        }
        let scale = radial.max_abs();
        if radial.antipodal_mismatch() > crate::sphere::PARITY_TOL * scale {
            return Err(Error::ParityViolation {
                max_odd: radial.antipodal_mismatch(),
            });
        }
        Ok(StarBody {
            name: String::from(name),
            radial,
            exact: None,
        })
    }

    pub fn from_fn(name: &str, grid: &Arc<SphereGrid>, rho: PointFn) -> Result<Self> {
        let r = rho.clone();
        let mut body = Self::new(name, SphericalFunction::from_fn(grid, move |u| r(u)))?;
        body.exact = Some(rho);
        Ok(body)
    }

    pub fn ball(grid: &Arc<SphereGrid>, radius: f64) -> Result<Self> {
        Self::from_fn("ball", grid, Arc::new(move |_| radius))
    }

    /// Ellipsoid with semi-axes `a` along the coordinate axes.
    pub fn ellipsoid(grid: &Arc<SphereGrid>, a: [f64; 3]) -> Result<Self> {
        Self::from_fn(
            "ellipsoid",
            grid,
            Arc::new(move |u| {
                let q = (u[0] / a[0]).powi(2) + (u[1] / a[1]).powi(2) + (u[2] / a[2]).powi(2);
                1.0 / q.sqrt()
            }),
        )
    }

    /// Radial function at an arbitrary direction.
    pub fn rho(&self, u: &Vec3) -> Result<f64> {
        match &self.exact {
            Some(f) => Ok(f(u)),
            None => {
                let s = self.radial.spectrum_at(self.radial.grid.bandwidth())?;
                Ok(s.eval(u))
            }
        }
    }

    fn rho_evaluator(&self) -> Result<PointFn> {
        match &self.exact {
            Some(f) => Ok(f.clone()),
            None => {
                let s = match &self.radial.spectrum {
                    Some(s) => s.clone(),
                    None => analyze(&self.radial, self.radial.grid.bandwidth())?,
                };
                Ok(Arc::new(move |u: &Vec3| s.eval(u)))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct IntersectionBodyReport {
    /// Direct great-circle values against the spectral route, relative.
    pub direct_vs_spectral: f64,
    /// Residual of `(ρ_{IL}·r^{-1})^∧ = 4π²·ρ_L²·r^{-2}` over the spectrum, relative.
    pub fourier_identity_residual: f64,
}

/// `ρ_{IL}(ξ) = |L ∩ ξ^⊥| = ½ R(ρ_L²)(ξ)`.
pub fn intersection_body_of(
    body: &StarBody,
    l_max: usize,
) -> Result<(StarBody, IntersectionBodyReport)> {
    let grid = &body.radial.grid;
    let rho = body.rho_evaluator()?;
    let n_circle = 2 * grid.bandwidth() + 64;
    let nodes = grid.nodes();
    let direct = par::map_range(grid.len(), |i| {
        0.5 * sradon_direct_fn(|u| rho(u).powi(2), &nodes[i], n_circle)
    });
    let sq = body.radial.map(|v| v * v);
    let sq_spec = analyze(&sq, l_max)?.even_part();
    let spectral = synthesize(&sradon_spectral(&sq_spec)?.scale(0.5), grid);
    let scale = crate::max_abs(&direct);
    let direct_vs_spectral = direct
        .iter()
        .zip(&spectral.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale;
    let il = SphericalFunction::new(grid.clone(), direct);
    let il_spec = analyze(&il, l_max)?.even_part();
    let lhs = fourier_homogeneous(&il_spec, 1.0)?;
    let rhs = sq_spec.scale((2.0 * PI).powi(3) / (PI * 2.0));
    let fourier_identity_residual = lhs
        .coeffs
        .iter()
        .zip(&rhs.coeffs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / rhs.max_abs();
    let mut radial = il;
    radial.spectrum = Some(il_spec);
    let out = StarBody {
        name: format!("I({})", body.name),
        radial,
        exact: None,
    };
    Ok((
        out,
        IntersectionBodyReport {
            direct_vs_spectral,
            fourier_identity_residual,
        },
    ))
}

fn radial_integral(density: &SeparableFunction, u: &Vec3, rho: f64, power: i32) -> f64 {
    adaptive(0.0, rho, 1e-13, |r| {
        r.powi(power) * density.eval(&[r * u[0], r * u[1], r * u[2]])
    })
    .0
}

/// `μ(L ∩ ξ^⊥)` for the measure with the given density, through
/// `R(∫_0^{ρ_L} r f(r·) dr)`.
pub fn section_measure(body: &StarBody, density: &SeparableFunction, xi: &Vec3) -> Result<f64> {
    let rho = body.rho_evaluator()?;
    let n = 2 * body.radial.grid.bandwidth() + 64;
    Ok(sradon_direct_fn(
        |u| radial_integral(density, u, rho(u), 1),
        xi,
        n,
    ))
}

/// `μ(L) = ∫_{S²} ∫_0^{ρ_L} r² f(r·) dr`.
pub fn body_measure(body: &StarBody, density: &SeparableFunction) -> Result<f64> {
    let rho = body.rho_evaluator()?;
    let grid = &body.radial.grid;
    let nodes = grid.nodes();
    let vals = par::map_range(grid.len(), |i| {
        radial_integral(density, &nodes[i], rho(&nodes[i]), 2)
    });
    Ok(grid.integrate(&vals))
}
