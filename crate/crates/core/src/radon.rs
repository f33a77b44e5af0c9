//! The classical Radon transform on R³, Fourier-slice machinery and
//! intersection-function tests.
//!
//! Conventions: `f̂(ξ) = ∫ f(x) e^{−i⟨x,ξ⟩} dx`; the sinogram of `φ` is
//! `Rφ(t,θ) = ∫_{⟨x,θ⟩=t} φ`, so `(Rφ(·,θ))^∧(z) = φ̂(zθ)`. For an intersection
//! function `f` of `g`, `|r|²f̂(rθ) = 8π² ĝ_t(r,θ)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::homogeneous::{PDCertificate, Verdict, WitnessPoint, PD_REL_TOL};
use crate::quad::{lagrange4, simpson_weights, GaussRule};
use crate::radial::SeparableFunction;
use crate::special::spherical_bessel_j;
use crate::sphere::{analyze_values, build_grid, synthesize_values, HarmonicSpectrum, SphereGrid};
use crate::{dot, par, Error, Result, Vec3};

/// `|r|^{2} f̂(rθ) = RELATION_CONSTANT · ĝ_t(r, θ)` for the dual pair `(f, g)`.
pub const RELATION_CONSTANT: f64 = 8.0 * PI * PI;

/// Symmetric uniform grid of `n` points on `[−t_max, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub t_max: f64,
    pub n: usize,
}

impl TGrid {
    pub fn new(t_max: f64, n: usize) -> Self {
        TGrid { t_max, n }
    }

    pub fn step(&self) -> f64 {
        2.0 * self.t_max / (self.n - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n).map(|i| -self.t_max + h * i as f64).collect()
    }
}

/// Sampled `Rφ(t, θ)` on a symmetric t-grid for one representative of each
/// antipodal pair of a sphere grid.
#[derive(Debug, Clone)]
pub struct Sinogram {
    pub t: TGrid,
    pub grid: Arc<SphereGrid>,
    /// Grid node index of each direction.
    pub nodes: Vec<usize>,
    pub directions: Vec<Vec3>,
    /// Quadrature weights of the directions, doubled for the hemisphere.
    pub weights: Vec<f64>,
    /// Row-major by direction, `t.n` values per row.
    pub values: Vec<f64>,
}

impl Sinogram {
    pub fn from_rows(grid: &Arc<SphereGrid>, t: TGrid, rows: Vec<Vec<f64>>) -> Self {
        let nodes = grid.hemisphere();
        assert_eq!(rows.len(), nodes.len(), "one row per hemisphere direction");
        let directions = nodes.iter().map(|&i| grid.nodes()[i]).collect();
        let weights = nodes.iter().map(|&i| 2.0 * grid.weights()[i]).collect();
        Sinogram {
            t,
            grid: grid.clone(),
            nodes,
            directions,
            weights,
            values: rows.concat(),
        }
    }

    /// Sample `g(t, θ)` on the grid.
    pub fn from_fn<F: Fn(f64, &Vec3) -> f64 + Sync>(grid: &Arc<SphereGrid>, t: TGrid, g: F) -> Self {
        let dirs: Vec<Vec3> = grid.hemisphere().iter().map(|&i| grid.nodes()[i]).collect();
        let ts = t.points();
        let rows = par::map_range(dirs.len(), |d| ts.iter().map(|&s| g(s, &dirs[d])).collect());
        Self::from_rows(grid, t, rows)
    }

    pub fn n_directions(&self) -> usize {
        self.directions.len()
    }

    pub fn row(&self, d: usize) -> &[f64] {
        &self.values[d * self.t.n..(d + 1) * self.t.n]
    }

    pub fn max_abs(&self) -> f64 {
        crate::max_abs(&self.values)
    }

    /// `max |g(−t, θ) − g(t, θ)|`.
    pub fn evenness_residual(&self) -> f64 {
        let n = self.t.n;
        (0..self.n_directions())
            .flat_map(|d| {
                let row = self.row(d);
                (0..n / 2).map(move |i| (row[i] - row[n - 1 - i]).abs())
            })
            .fold(0.0, f64::max)
    }

    /// `∫ g(t, θ) dt` per direction (trapezoid).
    pub fn masses(&self) -> Vec<f64> {
        let h = self.t.step();
        (0..self.n_directions())
            .map(|d| {
                let row = self.row(d);
                h * (row.iter().sum::<f64>() - 0.5 * (row[0] + row[row.len() - 1]))
            })
            .collect()
    }

    /// Relative spread `(max − min)/max|·|` of the per-direction masses.
    pub fn mass_spread(&self) -> f64 {
        let m = self.masses();
        let lo = m.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = m.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (hi - lo) / crate::max_abs(&m).max(f64::MIN_POSITIVE)
    }

    /// Interpolated value at `(t, direction d)`.
    pub fn interpolate(&self, d: usize, t: f64) -> f64 {
        lagrange4(self.row(d), -self.t.t_max, self.t.step(), t)
    }

    /// `∫ g(t, θ_d) cos(ρ t) dt` for every direction and frequency.
    pub fn cosine_transform(&self, rho: &[f64]) -> Vec<Vec<f64>> {
        let ts = self.t.points();
        let h = self.t.step();
        par::map_range(self.n_directions(), |d| {
            let row = self.row(d);
            let weights: Vec<f64> = (0..row.len())
                .map(|i| if i == 0 || i == row.len() - 1 { 0.5 * h } else { h })
                .collect();
            let w: Vec<f64> = row.iter().zip(&weights).map(|(a, b)| a * b).collect();
            cos_sum(&ts, &w, rho)
        })
    }
}

/// `out_j = Σ_i w_i cos(x_i y_j)` for uniformly spaced `y`, using a rotation
/// recurrence in `j` that is resynchronised every 32 steps.
fn cos_sum(x: &[f64], w: &[f64], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    let dy = if n > 1 { y[1] - y[0] } else { 0.0 };
    for (xi, wi) in x.iter().zip(w) {
        if *wi == 0.0 {
            continue;
        }
        let (ds, dc) = (xi * dy).sin_cos();
        let (mut s, mut c) = (0.0, 0.0);
        for (j, o) in out.iter_mut().enumerate() {
            if j % 32 == 0 {
                let (a, b) = (xi * y[j]).sin_cos();
                s = a;
                c = b;
            } else {
                let c2 = c * dc - s * ds;
                s = s * dc + c * ds;
                c = c2;
            }
            *o += wi * c;
        }
    }
    out
}

/// Grids and tolerances for the R³ pipelines.
#[derive(Debug, Clone)]
pub struct RnOptions {
    /// Directions are the hemisphere of this grid.
    pub directions: Arc<SphereGrid>,
    pub t: TGrid,
    /// The `r` grid is doubled while its half-width is below this value.
    pub r_cap: f64,
    pub pd_rel_tol: f64,
    /// Allowed `|m_θ|` at the grid boundary, relative to `max|m_θ|`.
    pub tail_tol: f64,
    pub domination_rel_tol: f64,
    pub norm_tol: f64,
    pub min_norm_gap: f64,
}

impl RnOptions {
    pub fn with_grid(directions: Arc<SphereGrid>) -> Self {
        RnOptions {
            directions,
            t: TGrid::new(16.0, 2048),
            r_cap: 1024.0,
            pd_rel_tol: PD_REL_TOL,
            tail_tol: 1e-6,
            domination_rel_tol: 1e-9,
            norm_tol: 1e-9,
            min_norm_gap: 1e-8,
        }
    }
}

impl Default for RnOptions {
    fn default() -> Self {
        Self::with_grid(Arc::new(build_grid(16, 32).expect("valid default grid")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadonRoute {
    /// Closed form when available, else polar quadrature.
    Auto,
    /// In-plane polar quadrature with Funk–Hecke for the angular factors.
    Polar,
    /// Inverse 1D transform of `φ̂(zθ)`.
    FourierSlice,
}

fn hemisphere_dirs(grid: &SphereGrid) -> Vec<Vec3> {
    grid.hemisphere().iter().map(|&i| grid.nodes()[i]).collect()
}

/// Evaluate `rows(dirs)` once when `isotropic` and replicate.
fn per_direction<F>(dirs: &[Vec3], isotropic: bool, f: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[Vec3]) -> Result<Vec<Vec<f64>>>,
{
    if isotropic && !dirs.is_empty() {
        let one = f(&dirs[..1])?.pop().expect("one row");
        Ok(vec![one; dirs.len()])
    } else {
        f(dirs)
    }
}

/// The sinogram of `phi` on the options' t-grid and hemisphere.
pub fn radon_transform(phi: &SeparableFunction, route: RadonRoute, opts: &RnOptions) -> Result<Sinogram> {
    let dirs = hemisphere_dirs(&opts.directions);
    let ts = opts.t.points();
    let rows = match route {
        RadonRoute::Auto => per_direction(&dirs, phi.isotropic, |d| phi.radon_rows(&ts, d, true))?,
        RadonRoute::Polar => per_direction(&dirs, phi.isotropic, |d| phi.radon_rows(&ts, d, false))?,
        RadonRoute::FourierSlice => {
            if !phi.hyperplane_integrable() {
                return Err(Error::DecayTooSlow);
            }
            per_direction(&dirs, phi.isotropic, |d| fourier_slice_rows(phi, &ts, d))?
        }
    };
    Ok(Sinogram::from_rows(&opts.directions, opts.t, rows))
}

/// Frequency cut-off beyond which `|φ̂| < 1e−14·|φ̂(0)|` along every ray.
fn fourier_cutoff(phi: &SeparableFunction, dirs: &[Vec3]) -> Result<f64> {
    let f0 = phi.fourier_rays(&[0.0], dirs)?;
    let scale = f0.iter().map(|r| r[0].abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut z = 8.0;
    while z < 4096.0 {
        let probe: Vec<f64> = (0..16).map(|i| z * (1.0 + i as f64 / 16.0)).collect();
        let v = phi.fourier_rays(&probe, dirs)?;
        let tail = v.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
        if tail < 1e-14 * scale {
            return Ok(z);
        }
        z *= 2.0;
    }
    Ok(z)
}

fn fourier_slice_rows(phi: &SeparableFunction, ts: &[f64], dirs: &[Vec3]) -> Result<Vec<Vec<f64>>> {
    let z_max = fourier_cutoff(phi, dirs)?;
    let rule = GaussRule::new(12);
    let panels = (z_max / 0.25).ceil() as usize;
    let (zs, ws) = rule.composite(0.0, z_max, panels);
    let fh = phi.fourier_rays(&zs, dirs)?;
    Ok(par::map_range(dirs.len(), |d| {
        let w: Vec<f64> = fh[d].iter().zip(&ws).map(|(a, b)| a * b / PI).collect();
        let mut out = vec![0.0; ts.len()];
        for (z, wz) in zs.iter().zip(&w) {
            for (o, t) in out.iter_mut().zip(ts) {
                *o += wz * (z * t).cos();
            }
        }
        out
    }))
}

/// `r ↦ f̂(rθ)` on the given radii.
pub fn fourier_along_ray(f: &SeparableFunction, theta: &Vec3, r: &[f64]) -> Result<Vec<f64>> {
    let theta = crate::normalize(*theta);
    Ok(f.fourier_rays(r, &[theta])?.pop().expect("one row"))
}

/// Largest relative mismatch between the 1D transform of each sinogram row and
/// `φ̂(zθ)` on `n_z` frequencies in `[0, z_max]`.
pub fn fourier_slice_residual(phi: &SeparableFunction, sino: &Sinogram, z_max: f64, n_z: usize) -> Result<f64> {
    let z: Vec<f64> = (0..n_z).map(|i| z_max * i as f64 / (n_z - 1) as f64).collect();
    let from_sino = sino.cosine_transform(&z);
    let exact = per_direction(&sino.directions, phi.isotropic, |d| phi.fourier_rays(&z, d))?;
    let scale = exact.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
    let err = from_sino
        .iter()
        .flatten()
        .zip(exact.iter().flatten())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(err / scale.max(f64::MIN_POSITIVE))
}

/// Per-direction positive-definiteness test of `m_θ(r) = r² f̂(rθ)`.
#[derive(Debug, Clone)]
pub struct IntersectionCertificate {
    pub verdict: Verdict,
    pub directions: Vec<Vec3>,
    /// Direction quadrature weights (hemisphere, doubled).
    pub weights: Vec<f64>,
    /// One certificate per direction, or a single one when `isotropic`.
    pub per_direction: Vec<PDCertificate>,
    pub isotropic: bool,
    /// Grid of the 1D transforms `M_θ(t) = ∫ m_θ(r) e^{−irt} dr`.
    pub t: TGrid,
    /// Half-width of the `r` grid actually used.
    pub r_max: f64,
    /// `max |m_θ|` near the boundary relative to `max |m_θ|`.
    pub tail_ratio: f64,
    /// Index into `per_direction` of the most negative transform.
    pub witness: usize,
}

impl IntersectionCertificate {
    pub fn is_intersection_function(&self) -> bool {
        self.verdict == Verdict::PositiveDefinite
    }

    /// The certificate that applies to direction `d`.
    pub fn for_direction(&self, d: usize) -> &PDCertificate {
        if self.isotropic {
            &self.per_direction[0]
        } else {
            &self.per_direction[d]
        }
    }

    /// `M_θ(t)` on the t-grid for direction `d`.
    pub fn transform(&self, d: usize) -> &[f64] {
        &self.for_direction(d).transform_data
    }

    /// Maximal t-intervals where `M_θ < −tolerance`, for direction `d`.
    pub fn negative_windows(&self, d: usize) -> Vec<(f64, f64)> {
        let c = self.for_direction(d);
        let ts = self.t.points();
        let mut out = Vec::new();
        let mut start: Option<f64> = None;
        for (i, (&t, &v)) in ts.iter().zip(&c.transform_data).enumerate() {
            let neg = v < -c.tolerance;
            match (neg, start) {
                (true, None) => start = Some(t),
                (false, Some(s)) => {
                    out.push((s, ts[i - 1]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s, self.t.t_max));
        }
        out
    }
}

/// Sample `m_θ` on `r_j = (j + ½)Δ`, `j < n_half`, extending the grid (same
/// `Δ`) until the boundary tail is small or `r_cap` is reached.
fn sample_m(
    f: &SeparableFunction,
    dirs: &[Vec3],
    opts: &RnOptions,
) -> Result<(Vec<f64>, Vec<Vec<f64>>, f64, f64)> {
    let dr = 2.0 * opts.t.t_max / (opts.t.n - 1) as f64;
    let mut n_half = opts.t.n / 2;
    loop {
        let r: Vec<f64> = (0..n_half).map(|j| (j as f64 + 0.5) * dr).collect();
        let fh = f.fourier_rays(&r, dirs)?;
        let m: Vec<Vec<f64>> = fh
            .into_iter()
            .map(|row| row.iter().zip(&r).map(|(v, x)| v * x * x).collect())
            .collect();
        let edge = (n_half / 100).max(4);
        let mut tail = 0.0_f64;
        for row in &m {
            let peak = crate::max_abs(row).max(f64::MIN_POSITIVE);
            tail = tail.max(crate::max_abs(&row[n_half - edge..]) / peak);
        }
        let r_max = (n_half as f64 - 0.5) * dr;
        if tail <= opts.tail_tol {
            return Ok((r, m, r_max, tail));
        }
        if r_max >= opts.r_cap {
            let max = m.iter().map(|row| crate::max_abs(row)).fold(0.0, f64::max);
            return Err(Error::GridTooCoarse { tail: tail * max, max });
        }
        n_half *= 2;
    }
}

/// Test whether `f` is an intersection function: for each direction, the 1D
/// transform of `m_θ(r) = r² f̂(rθ)` must be non-negative.
pub fn certify_intersection_function(f: &SeparableFunction, opts: &RnOptions) -> Result<IntersectionCertificate> {
    let all_dirs = hemisphere_dirs(&opts.directions);
    let weights: Vec<f64> = opts
        .directions
        .hemisphere()
        .iter()
        .map(|&i| 2.0 * opts.directions.weights()[i])
        .collect();
    let dirs: &[Vec3] = if f.isotropic { &all_dirs[..1] } else { &all_dirs };
    let (r, m, r_max, tail) = sample_m(f, dirs, opts)?;
    let dr = r[0] * 2.0;
    let ts = opts.t.points();
    let half = ts.len() / 2;
    let t_pos = &ts[ts.len() - half..];
    let per_direction: Vec<PDCertificate> = par::map_range(dirs.len(), |d| {
        let w: Vec<f64> = m[d].iter().map(|v| 2.0 * dr * v).collect();
        let pos = cos_sum(&r, &w, t_pos);
        let mut full = vec![0.0; ts.len()];
        let offset = ts.len() - half;
        for (i, v) in pos.iter().enumerate() {
            full[offset + i] = *v;
            full[half - 1 - i + (ts.len() - 2 * half)] = *v;
        }
        if ts.len() % 2 == 1 {
            // the t = 0 node
            full[half] = 2.0 * dr * m[d].iter().sum::<f64>();
        }
        let dir = dirs[d];
        PDCertificate::from_samples(full, opts.pd_rel_tol, |i| WitnessPoint::Frequency {
            t: ts[i],
            direction: dir,
        })
    });
    let (witness, _) = crate::min_with_index(
        &per_direction
            .iter()
            .map(|c| c.witness_value / c.tolerance.max(f64::MIN_POSITIVE))
            .collect::<Vec<_>>(),
    );
    let verdict = if per_direction.iter().all(|c| c.is_positive_definite()) {
        Verdict::PositiveDefinite
    } else {
        Verdict::NotPositiveDefinite
    };
    Ok(IntersectionCertificate {
        verdict,
        directions: all_dirs,
        weights,
        per_direction,
        isotropic: f.isotropic,
        t: opts.t,
        r_max,
        tail_ratio: tail,
        witness,
    })
}

/// `f(x) = ∫_{S²} g(⟨x,θ⟩, θ) dθ` at each point, by quadrature over the
/// sinogram's directions with four-point interpolation in `t`.
pub fn dual_radon(g: &Sinogram, points: &[Vec3]) -> Vec<f64> {
    par::map_range(points.len(), |i| {
        let x = &points[i];
        (0..g.n_directions())
            .map(|d| g.weights[d] * g.interpolate(d, dot(x, &g.directions[d])))
            .sum()
    })
}

/// Values on concentric spheres: `values[i][j]` at radius `radii[i]`, node `j`.
#[derive(Debug, Clone)]
pub struct ShellFunction {
    pub radii: Vec<f64>,
    pub grid: Arc<SphereGrid>,
    pub values: Vec<Vec<f64>>,
}

impl ShellFunction {
    pub fn points(&self) -> Vec<Vec3> {
        self.radii
            .iter()
            .flat_map(|&r| self.grid.nodes().iter().map(move |u| [r * u[0], r * u[1], r * u[2]]))
            .collect()
    }

    pub fn flat_values(&self) -> Vec<f64> {
        self.values.concat()
    }
}

/// [`dual_radon`] evaluated on shells.
pub fn dual_radon_shells(g: &Sinogram, radii: &[f64], eval_grid: &Arc<SphereGrid>) -> ShellFunction {
    let mut out = ShellFunction {
        radii: radii.to_vec(),
        grid: eval_grid.clone(),
        values: Vec::new(),
    };
    let vals = dual_radon(g, &out.points());
    out.values = vals.chunks(eval_grid.len()).map(|c| c.to_vec()).collect();
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionOfReport {
    /// Relative error of the per-shell harmonic expansion of `ĝ_t`.
    pub angular_truncation: f64,
    /// `max |f_Fourier − f_dual| / max |f_dual|` on the evaluation shells.
    pub dual_radon_agreement: f64,
    pub l_max: usize,
}

/// Frequency grid for the Fourier route: `[0, 16]` with 1025 points.
pub fn default_rho_grid() -> Vec<f64> {
    (0..1025).map(|i| 16.0 * i as f64 / 1024.0).collect()
}

/// The intersection function of `g` through its Fourier representation,
/// `f = (1/π)(|x|^{-2} ĝ_t(|x|, x/|x|))^∧`, with a consistency report.
pub fn intersection_function_of(
    g: &Sinogram,
    radii: &[f64],
    eval_grid: &Arc<SphereGrid>,
    l_max: usize,
) -> Result<(ShellFunction, IntersectionOfReport)> {
    let grid = &g.grid;
    let rho = default_rho_grid();
    let ghat = g.cosine_transform(&rho);
    // values on the full grid by evenness
    let mut full = vec![vec![0.0; grid.len()]; rho.len()];
    for (d, &node) in g.nodes.iter().enumerate() {
        for (i, v) in ghat[d].iter().enumerate() {
            full[i][node] = *v;
            full[i][grid.antipode(node)] = *v;
        }
    }
    let spectra = par::map_range(rho.len(), |i| analyze_values(grid, &full[i], l_max))
        .into_iter()
        .collect::<Result<Vec<HarmonicSpectrum>>>()?;
    let scale = full.iter().map(|r| crate::max_abs(r)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let angular_truncation = par::map_range(rho.len(), |i| {
        let back = synthesize_values(&spectra[i], grid);
        back.iter().zip(&full[i]).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    })
    .into_iter()
    .fold(0.0, f64::max)
        / scale;
    let w = simpson_weights(rho.len(), rho[1] - rho[0]);
    let n_coeffs = spectra[0].coeffs.len();
    let values = par::map_range(radii.len(), |ri| {
        let s = radii[ri];
        let mut spec = HarmonicSpectrum::zeros(l_max);
        for k in (0..=l_max).step_by(2) {
            let jk: Vec<f64> = rho.iter().zip(&w).map(|(p, wi)| wi * spherical_bessel_j(k, p * s)).collect();
            let sign = if (k / 2) % 2 == 0 { 4.0 } else { -4.0 };
            for c in k * k..((k + 1) * (k + 1)).min(n_coeffs) {
                let integral: f64 = spectra.iter().zip(&jk).map(|(sp, j)| sp.coeffs[c] * j).sum();
                spec.coeffs[c] = sign * integral;
            }
        }
        synthesize_values(&spec, eval_grid)
    });
    let out = ShellFunction {
        radii: radii.to_vec(),
        grid: eval_grid.clone(),
        values,
    };
    let dual = dual_radon(g, &out.points());
    let fv = out.flat_values();
    let dual_radon_agreement = fv.iter().zip(&dual).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
        / crate::max_abs(&dual).max(f64::MIN_POSITIVE);
    Ok((
        out,
        IntersectionOfReport {
            angular_truncation,
            dual_radon_agreement,
            l_max,
        },
    ))
}

/// `max |ĝ_t(ρ,θ) − ρ² f̂(ρθ)/(8π²)| / max |ĝ_t|` over the sinogram's
/// directions and the given frequencies.
pub fn relation_residual(g: &Sinogram, f: &SeparableFunction, rho: &[f64]) -> Result<f64> {
    let ghat = g.cosine_transform(rho);
    let fh = per_direction(&g.directions, f.isotropic, |d| f.fourier_rays(rho, d))?;
    let mut err = 0.0_f64;
    let mut scale = 0.0_f64;
    for (gr, fr) in ghat.iter().zip(&fh) {
        for ((a, b), r) in gr.iter().zip(fr).zip(rho) {
            err = err.max((a - r * r * b / RELATION_CONSTANT).abs());
            scale = scale.max(a.abs());
        }
    }
    Ok(err / scale.max(f64::MIN_POSITIVE))
}

/// Density of the non-negative measure `μ_θ` on a t-grid.
#[derive(Debug, Clone)]
pub struct RayMeasure {
    pub direction: Vec3,
    pub t: TGrid,
    pub density: Vec<f64>,
}

/// Symmetrised Gaussian test function
/// `½(e^{−|x−c|²/w²} + e^{−|x+c|²/w²})`, with closed-form sinogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProbe {
    pub width: f64,
    pub center: Vec3,
}

impl GaussianProbe {
    pub fn eval(&self, x: &Vec3) -> f64 {
        let w2 = self.width * self.width;
        let c = &self.center;
        let dm = (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2) + (x[2] - c[2]).powi(2);
        let dp = (x[0] + c[0]).powi(2) + (x[1] + c[1]).powi(2) + (x[2] + c[2]).powi(2);
        0.5 * ((-dm / w2).exp() + (-dp / w2).exp())
    }

    pub fn radon(&self, t: f64, theta: &Vec3) -> f64 {
        let w2 = self.width * self.width;
        let s = dot(&self.center, theta);
        0.5 * PI * w2 * ((-(t - s).powi(2) / w2).exp() + (-(t + s).powi(2) / w2).exp())
    }

    fn reach(&self) -> f64 {
        dot(&self.center, &self.center).sqrt() + 7.0 * self.width
    }
}

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub measures: Vec<RayMeasure>,
    /// `∫ f φ / ∫∫ Rφ dμ` for the calibration probe.
    pub calibration: f64,
    /// Per probe: `(∫ f φ, ∫∫ Rφ dμ, relative residual after calibration)`.
    pub probes: Vec<(f64, f64, f64)>,
    pub max_residual: f64,
    /// Smallest density value relative to the largest.
    pub min_density: f64,
}

/// Normalisation of `μ_θ` relative to the 1D transform of `m_θ`.
pub const MEASURE_NORMALISATION: f64 = 1.0 / (2.0 * 8.0 * PI * PI * PI);

/// Build `μ_θ` from a positive certificate and check
/// `∫ f φ = c ∫_{S²} ∫ Rφ(t,θ) dμ_θ(t) dθ` on the probes. The first probe
/// calibrates `c`.
pub fn classification_witness(
    f: &SeparableFunction,
    cert: &IntersectionCertificate,
    probes: &[GaussianProbe],
    lhs_grid: &SphereGrid,
) -> Result<WitnessReport> {
    if !cert.is_intersection_function() {
        return Err(Error::CertificateRequired);
    }
    if probes.is_empty() {
        return Err(Error::InputInvalid(alloc::string::String::from("at least one probe is required")));
    }
    let n_dirs = cert.directions.len();
    let measures: Vec<RayMeasure> = (0..n_dirs)
        .map(|d| RayMeasure {
            direction: cert.directions[d],
            t: cert.t,
            density: cert.transform(d).iter().map(|v| v * MEASURE_NORMALISATION).collect(),
        })
        .collect();
    let peak = measures.iter().map(|m| crate::max_abs(&m.density)).fold(0.0, f64::max);
    let min_density = measures
        .iter()
        .flat_map(|m| m.density.iter().copied())
        .fold(f64::INFINITY, f64::min)
        / peak.max(f64::MIN_POSITIVE);
    let ts = cert.t.points();
    let h = cert.t.step();
    let rule = GaussRule::new(16);
    let nodes = lhs_grid.nodes();
    let mut raw = Vec::with_capacity(probes.len());
    for probe in probes {
        let rhs: f64 = (0..n_dirs)
            .map(|d| {
                let dens = &measures[d].density;
                let s: f64 = ts.iter().zip(dens).map(|(t, m)| probe.radon(*t, &cert.directions[d]) * m).sum();
                cert.weights[d] * s * h
            })
            .sum();
        let reach = probe.reach();
        let panels = (reach / 0.25).ceil() as usize;
        let (rs, rw) = rule.composite(0.0, reach, panels);
        let shell = par::map_range(nodes.len(), |j| {
            let u = nodes[j];
            rs.iter()
                .zip(&rw)
                .map(|(r, w)| {
                    let x = [r * u[0], r * u[1], r * u[2]];
                    w * r * r * f.eval(&x) * probe.eval(&x)
                })
                .sum::<f64>()
        });
        let lhs = lhs_grid.integrate(&shell);
        raw.push((lhs, rhs));
    }
    let calibration = raw[0].0 / raw[0].1;
    let probes_out: Vec<(f64, f64, f64)> = raw
        .iter()
        .map(|&(l, r)| (l, r, (l - calibration * r).abs() / l.abs().max(f64::MIN_POSITIVE)))
        .collect();
    let max_residual = probes_out.iter().map(|p| p.2).fold(0.0, f64::max);
    Ok(WitnessReport {
        measures,
        calibration,
        probes: probes_out,
        max_residual,
        min_density,
    })
}
