//! L^p norms on R³, the classical Radon comparison verifier and the
//! counterexample synthesizer.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::quad::adaptive;
use crate::radial::{ClosedForms, Decay, RadialProfile, SeparableFunction, SeparableTerm};
use crate::radon::{
    certify_intersection_function, radon_transform, IntersectionCertificate, RadonRoute, RnOptions, Sinogram,
    MEASURE_NORMALISATION,
};
use crate::sphere::SphereGrid;
use crate::{par, Error, Result, Vec3};

/// `∫_{R³} |φ|^p` with the relative weight of the outermost 2% of the radial
/// range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpIntegral {
    pub value: f64,
    pub tail: f64,
}

/// Directions (hemisphere representatives) and doubled weights, or a single
/// direction of weight 4π for radial functions.
fn polar_directions(grid: &SphereGrid, isotropic: bool) -> (Vec<Vec3>, Vec<f64>) {
    if isotropic {
        return (alloc::vec![[0.0, 0.0, 1.0]], alloc::vec![4.0 * PI]);
    }
    let h = grid.hemisphere();
    (
        h.iter().map(|&i| grid.nodes()[i]).collect(),
        h.iter().map(|&i| 2.0 * grid.weights()[i]).collect(),
    )
}

/// `∫ F(x) dx` in polar form over the ball of radius `extent`, for an even
/// integrand; returns the total and the part from `[0.98·extent, extent]`.
fn polar_integral<F: Fn(&Vec3) -> f64 + Sync>(
    f: F,
    extent: f64,
    grid: &SphereGrid,
    isotropic: bool,
) -> (f64, f64) {
    let (dirs, weights) = polar_directions(grid, isotropic);
    let cut = 0.98 * extent;
    let rows = par::map_range(dirs.len(), |d| {
        let u = dirs[d];
        let g = |r: f64| r * r * f(&[r * u[0], r * u[1], r * u[2]]);
        let (inner, _) = adaptive(0.0, cut, 1e-13, g);
        let (outer, _) = adaptive(cut, extent, 1e-13, g);
        (inner, outer)
    });
    rows.iter().zip(&weights).fold((0.0, 0.0), |(a, b), ((i, o), w)| (a + w * (i + o), b + w * o))
}

pub fn lp_integral_rn(phi: &SeparableFunction, p: f64, grid: &SphereGrid) -> Result<LpIntegral> {
    if !(p > 0.0) {
        return Err(Error::OutOfRange("p must be positive"));
    }
    let (total, outer) = polar_integral(|x| phi.eval(x).abs().powf(p), phi.extent, grid, phi.isotropic);
    Ok(LpIntegral {
        value: total,
        tail: outer.abs() / total.abs().max(f64::MIN_POSITIVE),
    })
}

/// `‖φ‖_{L^p(R³)}` by polar quadrature over the directions of `grid`.
pub fn lp_norm_rn(phi: &SeparableFunction, p: f64, grid: &SphereGrid) -> Result<f64> {
    let lp = lp_integral_rn(phi, p, grid)?;
    if lp.tail > 1e-6 {
        return Err(Error::TailTooHeavy {
            tail: lp.tail * lp.value,
            total: lp.value,
        });
    }
    Ok(lp.value.powf(1.0 / p))
}

/// `min (b − a)` over all samples.
pub fn sinogram_dominates(a: &Sinogram, b: &Sinogram) -> Result<f64> {
    if a.t != b.t || a.nodes != b.nodes || a.grid.len() != b.grid.len() {
        return Err(Error::GridMismatch);
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| y - x)
        .fold(f64::INFINITY, f64::min))
}

/// Status of the intersection-function hypothesis of a comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum Hypothesis {
    /// The relevant power was certified to be an intersection function.
    Holds,
    /// The certificate found a negative transform.
    Fails,
    /// The relevant power cannot be certified (reason attached).
    NotEvaluable(String),
    /// `p = 1`: domination alone decides.
    NotRequired,
}

/// Numerical replay of the proof of the classical comparison theorem.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RnProofChain {
    /// p > 1: `∫φ^p`; 0 < p < 1: `∫ψ^{p−1}φ`.
    pub pairing_lhs: f64,
    /// p > 1: `∫φ^{p−1}ψ`; 0 < p < 1: `∫ψ^p`.
    pub pairing_rhs: f64,
    /// p > 1: `‖φ‖_p^{p−1}‖ψ‖_p`; 0 < p < 1: `‖φ‖_p‖ψ‖_p^{p−1}`.
    pub holder_bound: f64,
    /// Relative mismatch of `∫φ^{p−1}ψ` (resp. `∫ψ^{p−1}φ`) computed in space
    /// and through the measures `μ_θ` against the sinogram.
    pub measure_pairing_residual: f64,
    /// `|(‖ψ‖₁ − ‖φ‖₁) − (1/4π)∫∫(Rψ − Rφ)|` relative, for `p = 1`.
    pub cavalieri_residual: f64,
}

#[derive(Debug, Clone)]
pub struct RnComparisonReport {
    pub p: f64,
    /// `min (Rψ − Rφ)` over the sinogram grid.
    pub domination_margin: f64,
    pub domination_tolerance: f64,
    pub certificate: Option<IntersectionCertificate>,
    pub hypothesis: Hypothesis,
    pub lp_phi: f64,
    pub lp_psi: f64,
    /// `‖ψ‖_p^p / ‖φ‖_p^p`.
    pub norm_ratio: f64,
    /// `‖φ‖_p ≤ ‖ψ‖_p + tol`.
    pub conclusion_holds: bool,
    pub chain: RnProofChain,
}

impl RnComparisonReport {
    pub fn is_violation(&self) -> bool {
        self.hypothesis == Hypothesis::Holds && !self.conclusion_holds
    }
}

/// Minimum of `f` on radial lines through the hemisphere directions of
/// `grid`, relative to its maximum.
fn sampled_min(f: &SeparableFunction, grid: &SphereGrid) -> (f64, f64) {
    let (dirs, _) = polar_directions(grid, f.isotropic);
    let n = 2048;
    let dr = f.extent / (n - 1) as f64;
    let rows = par::map_range(dirs.len(), |d| {
        let u = dirs[d];
        (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
            let r = i as f64 * dr;
            let v = f.eval(&[r * u[0], r * u[1], r * u[2]]);
            (lo.min(v), hi.max(v))
        })
    });
    rows.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| (lo.min(*a), hi.max(*b)))
}

/// Closed forms first unless `polar`, which forces the quadrature route when
/// the separable terms are complete.
fn sinogram_of(f: &SeparableFunction, opts: &RnOptions, polar: bool) -> Result<Sinogram> {
    let route = if polar && f.terms_complete() && !f.terms.is_empty() {
        RadonRoute::Polar
    } else {
        RadonRoute::Auto
    };
    radon_transform(f, route, opts)
}

/// `c Σ_d w_d ∫ Rχ(t,θ_d) dμ_d(t)` with `μ_d = MEASURE_NORMALISATION·M_d`.
fn measure_pairing(cert: &IntersectionCertificate, sino: &Sinogram) -> f64 {
    let h = cert.t.step();
    (0..sino.n_directions())
        .map(|d| {
            let m = cert.transform(d);
            let s: f64 = sino.row(d).iter().zip(m).map(|(a, b)| a * b).sum();
            sino.weights[d] * s * h * MEASURE_NORMALISATION
        })
        .sum()
}

/// Verify the classical comparison theorem on a concrete pair `(φ, ψ)`.
pub fn verify_comparison_radon(
    phi: &SeparableFunction,
    psi: &SeparableFunction,
    p: f64,
    opts: &RnOptions,
) -> Result<RnComparisonReport> {
    if !(p > 0.0) {
        return Err(Error::OutOfRange("p must be positive"));
    }
    let grid = &opts.directions;
    for (name, f) in [("phi", phi), ("psi", psi)] {
        let (lo, hi) = sampled_min(f, grid);
        if lo < -1e-12 * hi.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::InputInvalid(format!("{name} takes negative values (minimum {lo:e})")));
        }
    }
    let r_phi = sinogram_of(phi, opts, false)?;
    let r_psi = sinogram_of(psi, opts, false)?;
    let margin = sinogram_dominates(&r_phi, &r_psi)?;
    let dom_tol = opts.domination_rel_tol * r_psi.max_abs();
    if margin < -dom_tol {
        return Err(Error::DominationFails { margin });
    }
    let i_phi = lp_integral_rn(phi, p, grid)?;
    let i_psi = lp_integral_rn(psi, p, grid)?;
    for lp in [i_phi, i_psi] {
        if lp.tail > 1e-6 {
            return Err(Error::TailTooHeavy {
                tail: lp.tail * lp.value,
                total: lp.value,
            });
        }
    }
    let lp_phi = i_phi.value.powf(1.0 / p);
    let lp_psi = i_psi.value.powf(1.0 / p);
    let mut chain = RnProofChain::default();
    let (certificate, hypothesis) = if p == 1.0 {
        let h = opts.t.step();
        let diff: f64 = (0..r_phi.n_directions())
            .map(|d| {
                let s: f64 = r_psi.row(d).iter().zip(r_phi.row(d)).map(|(a, b)| a - b).sum();
                r_phi.weights[d] * s * h
            })
            .sum::<f64>()
            / (4.0 * PI);
        let gap = i_psi.value - i_phi.value;
        chain.cavalieri_residual = (gap - diff).abs() / i_psi.value.abs().max(i_phi.value.abs()).max(f64::MIN_POSITIVE);
        chain.pairing_lhs = i_phi.value;
        chain.pairing_rhs = i_psi.value;
        chain.holder_bound = i_psi.value;
        (None, Hypothesis::NotRequired)
    } else {
        let (base, other, base_sino) = if p > 1.0 { (phi, psi, &r_psi) } else { (psi, phi, &r_phi) };
        let power = base.pow(p - 1.0);
        let admissible = match power.decay {
            Decay::Schwartz => true,
            Decay::Algebraic { order } => order > 0.0,
        };
        if !admissible {
            (
                None,
                Hypothesis::NotEvaluable(format!("{}^{} grows at infinity", base.label, p - 1.0)),
            )
        } else {
            match certify_intersection_function(&power, opts) {
                Ok(cert) => {
                    let holds = cert.is_intersection_function();
                    let (spatial, _) = polar_integral(
                        |x| power.eval(x) * other.eval(x),
                        base.extent.max(other.extent),
                        grid,
                        power.isotropic && other.isotropic,
                    );
                    if holds {
                        let via_measure = measure_pairing(&cert, base_sino);
                        chain.measure_pairing_residual =
                            (spatial - via_measure).abs() / spatial.abs().max(f64::MIN_POSITIVE);
                    }
                    if p > 1.0 {
                        chain.pairing_lhs = i_phi.value;
                        chain.pairing_rhs = spatial;
                        chain.holder_bound = lp_phi.powf(p - 1.0) * lp_psi;
                    } else {
                        chain.pairing_lhs = spatial;
                        chain.pairing_rhs = i_psi.value;
                        chain.holder_bound = lp_phi * lp_psi.powf(p - 1.0);
                    }
                    let status = if holds { Hypothesis::Holds } else { Hypothesis::Fails };
                    (Some(cert), status)
                }
                Err(Error::NotEvaluable(why)) => (None, Hypothesis::NotEvaluable(String::from(why))),
                Err(Error::GridTooCoarse { .. }) => (
                    None,
                    Hypothesis::NotEvaluable(String::from("transform tail not resolved within the r-grid cap")),
                ),
                Err(e) => return Err(e),
            }
        }
    };
    let tol = opts.norm_tol * lp_psi.abs().max(1.0);
    Ok(RnComparisonReport {
        p,
        domination_margin: margin,
        domination_tolerance: dom_tol,
        certificate,
        hypothesis,
        lp_phi,
        lp_psi,
        norm_ratio: i_psi.value / i_phi.value,
        conclusion_holds: lp_phi <= lp_psi + tol,
        chain,
    })
}

/// Radial function `h` whose hyperplane integrals are
/// `Rh(t) = t^{2j} e^{−t²/w²}`: `h(s) = (1/π)(s^{2j}/w² − j s^{2j−2}) e^{−s²/w²}`.
pub fn radon_window(j: usize, width: f64, grid: &Arc<SphereGrid>) -> SeparableFunction {
    let w2 = width * width;
    let jj = j as i32;
    let jf = j as f64;
    let h = move |s: f64| {
        let lead = s.powi(2 * jj) / w2;
        let low = if j == 0 { 0.0 } else { jf * s.powi(2 * jj - 2) };
        (lead - low) * (-s * s / w2).exp() / PI
    };
    let r_max = width * (45.0_f64.sqrt() + 2.0 * jf.sqrt());
    let profile = RadialProfile::from_fn(Arc::new(h), r_max, 2049, Decay::Schwartz);
    let closed = ClosedForms {
        spatial: Some(Arc::new(move |x: &Vec3| h(crate::dot(x, x).sqrt()))),
        fourier_ray: None,
        radon: Some(Arc::new(move |t, _: &Vec3| t.powi(2 * jj) * (-t * t / w2).exp())),
    };
    let mut f = SeparableFunction::from_terms(
        &format!("window({j},{width})"),
        alloc::vec![SeparableTerm::radial(profile, grid)],
    )
    .with_closed(closed);
    f.extent = r_max;
    f
}

/// Parameters of the radial window used by a construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialWindow {
    pub j: usize,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RnBranch {
    /// p > 1: `φ = ψ − ηh`.
    Upper,
    /// 0 < p < 1: `ψ = φ + ηh`.
    Lower,
}

#[derive(Debug, Clone)]
pub struct RnCounterexample {
    pub phi: SeparableFunction,
    pub psi: SeparableFunction,
    pub p: f64,
    pub branch: RnBranch,
    pub certificate: IntersectionCertificate,
    /// Directions whose certificate failed.
    pub failing_directions: usize,
    pub window: RadialWindow,
    /// `Σ_d w_d ∫ Rh dμ_d`, negative for the chosen window.
    pub pairing_gain: f64,
    pub eta: f64,
    pub halvings: usize,
    pub domination_margin: f64,
    pub domination_tolerance: f64,
    /// Sampled minimum of the constructed function.
    pub min_constructed: f64,
    pub lp_phi: f64,
    pub lp_psi: f64,
    /// `‖φ‖_p − ‖ψ‖_p`.
    pub norm_gap: f64,
    /// `‖φ‖_p^p − ‖ψ‖_p^p`.
    pub power_gap: f64,
}

/// Search lattice of windows: `j ∈ {1..4}`, widths from 0.25 to 1.02.
fn window_lattice() -> Vec<RadialWindow> {
    let mut out = Vec::new();
    for j in 1..=4 {
        for i in 0..12 {
            out.push(RadialWindow {
                j,
                width: 0.25 + 0.07 * i as f64,
            });
        }
    }
    out
}

/// `η₀ = ½ min_{h>0} base/h` over sampled radial lines.
fn eta_start(base: &SeparableFunction, h: &SeparableFunction, grid: &SphereGrid, sign: f64) -> f64 {
    let (dirs, _) = polar_directions(grid, base.isotropic && h.isotropic);
    let n = 2048;
    let dr = h.extent / (n - 1) as f64;
    let best = par::map_range(dirs.len(), |d| {
        let u = dirs[d];
        (0..n).fold(f64::INFINITY, |m, i| {
            let r = i as f64 * dr;
            let x = [r * u[0], r * u[1], r * u[2]];
            // the perturbation moves base by sign·η·h; only decreases matter
            let hv = -sign * h.eval(&x);
            if hv > 0.0 {
                m.min(base.eval(&x) / hv)
            } else {
                m
            }
        })
    });
    0.5 * best.into_iter().fold(f64::INFINITY, f64::min)
}

/// Execute the construction of a counterexample to the classical comparison.
///
/// For `p > 1` the input is `ψ` and the output `φ = ψ − ηh`; for `0 < p < 1`
/// the input is `φ` and the output `ψ = φ + ηh`. The perturbation `h` is
/// radial with non-negative hyperplane integrals, so `Rφ ≤ Rψ`.
pub fn construct_counterexample_radon(
    input: &SeparableFunction,
    p: f64,
    opts: &RnOptions,
) -> Result<RnCounterexample> {
    if !(p > 0.0) || p == 1.0 {
        return Err(Error::OutOfRange("p must be positive and different from 1"));
    }
    let branch = if p > 1.0 { RnBranch::Upper } else { RnBranch::Lower };
    let grid = &opts.directions;
    let power = input.pow(p - 1.0);
    let admissible = match power.decay {
        Decay::Schwartz => true,
        Decay::Algebraic { order } => order > 0.0,
    };
    if !admissible {
        return Err(Error::InputInvalid(format!(
            "{}^{} leaves the admissible decay class",
            input.label,
            p - 1.0
        )));
    }
    let (lo, hi) = sampled_min(input, grid);
    if lo < -1e-12 * hi.abs() {
        return Err(Error::InputInvalid(format!("input takes negative values (minimum {lo:e})")));
    }
    let cert = certify_intersection_function(&power, opts)?;
    if cert.is_intersection_function() {
        return Err(Error::NotApplicable(
            "the power of the input is an intersection function, comparison holds",
        ));
    }
    let n_dirs = cert.directions.len();
    let failing = (0..n_dirs).filter(|&d| !cert.for_direction(d).is_positive_definite()).count();

    // score every window by its pairing with the measures
    let ts = cert.t.points();
    let h_t = cert.t.step();
    let scored: Vec<(RadialWindow, f64)> = window_lattice()
        .into_iter()
        .map(|w| {
            let w2 = w.width * w.width;
            let gain: f64 = (0..n_dirs)
                .map(|d| {
                    let m = cert.transform(d);
                    let s: f64 = ts
                        .iter()
                        .zip(m)
                        .map(|(t, v)| t.powi(2 * w.j as i32) * (-t * t / w2).exp() * v)
                        .sum();
                    cert.weights[d] * s * h_t * MEASURE_NORMALISATION
                })
                .sum();
            (w, gain)
        })
        .filter(|(_, g)| *g < 0.0)
        .collect();
    if scored.is_empty() {
        return Err(Error::ConstructionFailed(String::from(
            "no window in the search lattice pairs negatively with the measures",
        )));
    }
    // rank by predicted first-order change −p·η₀·gain
    let sign = if branch == RnBranch::Upper { -1.0 } else { 1.0 };
    let mut ranked: Vec<(RadialWindow, f64, f64, SeparableFunction)> = scored
        .into_iter()
        .map(|(w, gain)| {
            let h = radon_window(w.j, w.width, grid);
            let eta0 = eta_start(input, &h, grid, sign);
            (w, gain, eta0 * gain.abs(), h)
        })
        .filter(|c| c.2.is_finite() && c.2 > 0.0)
        .collect();
    ranked.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap_or(core::cmp::Ordering::Equal));

    let i_input = lp_integral_rn(input, p, grid)?;
    let r_input = sinogram_of(input, opts, true)?;
    let mut last = String::from("no candidate windows");
    for (window, gain, _, h) in ranked.iter().take(4) {
        let mut eta = eta_start(input, h, grid, sign);
        for halvings in 0..=20 {
            let out = input.linear_combination(1.0, h, sign * eta);
            let (lo, hi) = sampled_min(&out, grid);
            if lo >= 0.0 {
                let r_out = sinogram_of(&out, opts, true)?;
                let (r_phi, r_psi) = match branch {
                    RnBranch::Upper => (&r_out, &r_input),
                    RnBranch::Lower => (&r_input, &r_out),
                };
                let margin = sinogram_dominates(r_phi, r_psi)?;
                let dom_tol = opts.domination_rel_tol * r_psi.max_abs();
                let i_out = lp_integral_rn(&out, p, grid)?;
                let (i_phi, i_psi) = match branch {
                    RnBranch::Upper => (i_out.value, i_input.value),
                    RnBranch::Lower => (i_input.value, i_out.value),
                };
                let lp_phi = i_phi.powf(1.0 / p);
                let lp_psi = i_psi.powf(1.0 / p);
                let gap = lp_phi - lp_psi;
                let power_gap = i_phi - i_psi;
                if margin >= -dom_tol && gap > opts.min_norm_gap && power_gap > opts.min_norm_gap {
                    let (phi, psi) = match branch {
                        RnBranch::Upper => (out, input.clone()),
                        RnBranch::Lower => (input.clone(), out),
                    };
                    return Ok(RnCounterexample {
                        phi,
                        psi,
                        p,
                        branch,
                        certificate: cert,
                        failing_directions: failing,
                        window: *window,
                        pairing_gain: *gain,
                        eta,
                        halvings,
                        domination_margin: margin,
                        domination_tolerance: dom_tol,
                        min_constructed: lo,
                        lp_phi,
                        lp_psi,
                        norm_gap: gap,
                        power_gap,
                    });
                }
                last = format!(
                    "window {window:?}: eta {eta:e}, margin {margin:e}, norm gap {gap:e}, max {hi:e}"
                );
            }
            eta *= 0.5;
        }
    }
    Err(Error::ConstructionFailed(last))
}
