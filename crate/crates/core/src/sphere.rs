//! Quadrature grids on S², real spherical-harmonic transforms and L^p norms.
//!
//! Nodes are stored ring by ring: node `i·n_azimuth + j` sits at polar cosine
//! `z_i` (Gauss–Legendre, ascending) and azimuth `φ_j = 2πj/n_azimuth`.
//!
//! Spectra use the real orthonormal basis
//! `Y_{k,0} = P̄_k^0(z)`, `Y_{k,m} = √2 P̄_k^m(z) cos(mφ)`,
//! `Y_{k,-m} = √2 P̄_k^m(z) sin(mφ)` (no Condon–Shortley phase), flattened by
//! [`sh_index`].

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};
#[allow(unused_imports)]
use num_traits::Float;

use crate::special::{gauss_legendre, sh_count, sh_index, AssocLegendre};
use crate::{normalize, orthonormal_frame, par, Error, Result, Vec3};

/// Relative tolerance for antipodal agreement of even functions.
pub const PARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SphereGrid {
    n_polar: usize,
    n_azimuth: usize,
    z: Vec<f64>,
    polar_weights: Vec<f64>,
    phi: Vec<f64>,
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
}

/// Build a Gauss–Legendre × uniform grid.
pub fn build_grid(n_polar: usize, n_azimuth: usize) -> Result<SphereGrid> {
    if n_polar < 2 {
        return Err(Error::InvalidGrid("n_polar must be at least 2"));
    }
    if n_azimuth < 4 || n_azimuth % 2 == 1 {
        return Err(Error::InvalidGrid("n_azimuth must be even and at least 4"));
    }
    let (z, polar_weights) = gauss_legendre(n_polar);
    let phi: Vec<f64> = (0..n_azimuth)
        .map(|j| 2.0 * PI * j as f64 / n_azimuth as f64)
        .collect();
    let dphi = 2.0 * PI / n_azimuth as f64;
    let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
    let mut weights = Vec::with_capacity(n_polar * n_azimuth);
    for i in 0..n_polar {
        let s = (1.0 - z[i] * z[i]).max(0.0).sqrt();
        for &p in &phi {
            nodes.push([s * p.cos(), s * p.sin(), z[i]]);
            weights.push(polar_weights[i] * dphi);
        }
    }
    Ok(SphereGrid {
        n_polar,
        n_azimuth,
        z,
        polar_weights,
        phi,
        nodes,
        weights,
    })
}

impl SphereGrid {
    pub fn n_polar(&self) -> usize {
        self.n_polar
    }

    pub fn n_azimuth(&self) -> usize {
        self.n_azimuth
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn polar_cosines(&self) -> &[f64] {
        &self.z
    }

    pub fn azimuths(&self) -> &[f64] {
        &self.phi
    }

    /// Largest degree `L` for which analysis of band-limited data of degree
    /// `L` is exact.
    pub fn bandwidth(&self) -> usize {
        (self.n_polar - 1).min((self.n_azimuth - 1) / 2)
    }

    /// Index of the node at `−u` for the node with index `idx`.
    pub fn antipode(&self, idx: usize) -> usize {
        let (i, j) = (idx / self.n_azimuth, idx % self.n_azimuth);
        (self.n_polar - 1 - i) * self.n_azimuth + (j + self.n_azimuth / 2) % self.n_azimuth
    }

    /// One representative from each antipodal pair. Weights of the returned
    /// nodes should be doubled to integrate even functions over the sphere.
    pub fn hemisphere(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.antipode(i) < i).collect()
    }

    /// `∫_{S²} f` by quadrature over the node values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// Evaluate a closure at every node.
    pub fn sample<F: Fn(&Vec3) -> f64>(&self, f: F) -> Vec<f64> {
        self.nodes.iter().map(f).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSpectrum {
    pub l_max: usize,
    pub coeffs: Vec<f64>,
}

impl HarmonicSpectrum {
    pub fn zeros(l_max: usize) -> Self {
        HarmonicSpectrum {
            l_max,
            coeffs: vec![0.0; sh_count(l_max)],
        }
    }

    /// The spectrum of the constant function `c`.
    pub fn constant(c: f64, l_max: usize) -> Self {
        let mut s = Self::zeros(l_max);
        s.coeffs[0] = c * (4.0 * PI).sqrt();
        s
    }

    pub fn get(&self, k: usize, m: i64) -> f64 {
        if k > self.l_max {
            return 0.0;
        }
        self.coeffs[sh_index(k, m)]
    }

    pub fn set(&mut self, k: usize, m: i64, v: f64) {
        self.coeffs[sh_index(k, m)] = v;
    }

    /// Copy truncated or zero-padded to degree `l_max`.
    pub fn resized(&self, l_max: usize) -> Self {
        let mut out = Self::zeros(l_max);
        let n = sh_count(l_max.min(self.l_max));
        out.coeffs[..n].copy_from_slice(&self.coeffs[..n]);
        out
    }

    /// Multiply every coefficient of degree `k` by `factor(k)`.
    pub fn map_degrees<F: Fn(usize) -> f64>(&self, factor: F) -> Self {
        let mut out = self.clone();
        for k in 0..=self.l_max {
            let c = factor(k);
            for v in &mut out.coeffs[k * k..(k + 1) * (k + 1)] {
                *v *= c;
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// `self + c·other`, at the larger of the two degrees.
    pub fn add_scaled(&self, other: &HarmonicSpectrum, c: f64) -> Self {
        let l = self.l_max.max(other.l_max);
        let mut out = self.resized(l);
        for (o, v) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *o += c * v;
        }
        out
    }

    /// Largest magnitude among odd-degree coefficients.
    pub fn max_odd(&self) -> f64 {
        let mut m = 0.0_f64;
        for k in (1..=self.l_max).step_by(2) {
            for v in &self.coeffs[k * k..(k + 1) * (k + 1)] {
                m = m.max(v.abs());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        crate::max_abs(&self.coeffs)
    }

    /// True when odd-degree content is below `1e-10` of the largest coefficient.
    pub fn is_even(&self) -> bool {
        self.max_odd() <= PARITY_TOL * self.max_abs().max(f64::MIN_POSITIVE)
    }

    /// Copy with all odd-degree coefficients set to zero.
    pub fn even_part(&self) -> Self {
        self.map_degrees(|k| if k % 2 == 0 { 1.0 } else { 0.0 })
    }

    /// `Σ a_{k,m} b_{k,m}`, which equals `∫_{S²} f g` for the represented functions.
    pub fn inner(&self, other: &HarmonicSpectrum) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    /// Degree-`k` component `Σ_m a_{k,m} Y_{k,m}(u)`.
    pub fn eval_degree(&self, k: usize, u: &Vec3) -> f64 {
        if k > self.l_max {
            return 0.0;
        }
        let z = u[2].clamp(-1.0, 1.0);
        let phi = u[1].atan2(u[0]);
        let table = AssocLegendre::new(k, z);
        let mut s = self.get(k, 0) * table.get(k, 0);
        for m in 1..=k {
            let (sn, cs) = (m as f64 * phi).sin_cos();
            let p = SQRT_2 * table.get(k, m);
            s += p * (self.get(k, m as i64) * cs + self.get(k, -(m as i64)) * sn);
        }
        s
    }

    /// Point evaluation `Σ a_{k,m} Y_{k,m}(u)` at a unit vector.
    pub fn eval(&self, u: &Vec3) -> f64 {
        let z = u[2].clamp(-1.0, 1.0);
        let phi = u[1].atan2(u[0]);
        let l = self.l_max;
        let table = AssocLegendre::new(l, z);
        let mut s = 0.0;
        for k in 0..=l {
            s += self.get(k, 0) * table.get(k, 0);
        }
        for m in 1..=l {
            let (sn, cs) = (m as f64 * phi).sin_cos();
            let mut a = 0.0;
            let mut b = 0.0;
            for k in m..=l {
                let p = table.get(k, m);
                a += self.get(k, m as i64) * p;
                b += self.get(k, -(m as i64)) * p;
            }
            s += SQRT_2 * (a * cs + b * sn);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// Samples of a real function at the nodes of a grid.
#[derive(Debug, Clone)]
pub struct SphericalFunction {
    pub grid: Arc<SphereGrid>,
    pub values: Vec<f64>,
    pub spectrum: Option<HarmonicSpectrum>,
    pub parity: Parity,
}

impl SphericalFunction {
    /// Wrap node values; the parity flag is inferred from antipodal sampling.
    pub fn new(grid: Arc<SphereGrid>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "one value per grid node");
        let parity = infer_parity(&grid, &values);
        SphericalFunction {
            grid,
            values,
            spectrum: None,
            parity,
        }
    }

    pub fn from_fn<F: Fn(&Vec3) -> f64>(grid: &Arc<SphereGrid>, f: F) -> Self {
        Self::new(grid.clone(), grid.sample(f))
    }

    pub fn constant(grid: &Arc<SphereGrid>, c: f64) -> Self {
        let mut f = Self::new(grid.clone(), vec![c; grid.len()]);
        f.spectrum = Some(HarmonicSpectrum::constant(c, 0));
        f
    }

    /// Attach the spectrum to degree `l_max` (analysis on the node values).
    pub fn with_spectrum(mut self, l_max: usize) -> Result<Self> {
        let s = analyze(&self, l_max)?;
        self.spectrum = Some(s);
        Ok(self)
    }

    /// The attached spectrum at degree `l_max`, analysing if absent or shorter.
    pub fn spectrum_at(&self, l_max: usize) -> Result<HarmonicSpectrum> {
        match &self.spectrum {
            Some(s) if s.l_max >= l_max => Ok(s.resized(l_max)),
            _ => analyze(self, l_max),
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        crate::max_abs(&self.values)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.min() > 0.0
    }

    /// Largest antipodal mismatch `|f(u) − f(−u)|`.
    pub fn antipodal_mismatch(&self) -> f64 {
        (0..self.values.len())
            .map(|i| (self.values[i] - self.values[self.grid.antipode(i)]).abs())
            .fold(0.0, f64::max)
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        Self::new(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise power `f^q` (for non-negative samples).
    pub fn powf(&self, q: f64) -> Self {
        self.map(|v| v.powf(q))
    }

    pub fn integral(&self) -> f64 {
        self.grid.integrate(&self.values)
    }
}

fn infer_parity(grid: &SphereGrid, values: &[f64]) -> Parity {
    let scale = crate::max_abs(values).max(f64::MIN_POSITIVE);
    let mut even = true;
    let mut odd = true;
    for i in 0..values.len() {
        let a = values[grid.antipode(i)];
        if (values[i] - a).abs() > PARITY_TOL * scale {
            even = false;
        }
        if (values[i] + a).abs() > PARITY_TOL * scale {
            odd = false;
        }
    }
    match (even, odd) {
        (true, _) => Parity::Even,
        (false, true) => Parity::Odd,
        _ => Parity::None,
    }
}

fn trig_table(grid: &SphereGrid, l_max: usize) -> (Vec<f64>, Vec<f64>) {
    let n = grid.n_azimuth;
    let mut cos_t = vec![0.0; (l_max + 1) * n];
    let mut sin_t = vec![0.0; (l_max + 1) * n];
    for m in 0..=l_max {
        for j in 0..n {
            let (s, c) = (m as f64 * grid.phi[j]).sin_cos();
            cos_t[m * n + j] = c;
            sin_t[m * n + j] = s;
        }
    }
    (cos_t, sin_t)
}

/// Quadrature projection of node values onto the harmonic basis up to `l_max`.
pub fn analyze_values(grid: &SphereGrid, values: &[f64], l_max: usize) -> Result<HarmonicSpectrum> {
    let bandwidth = grid.bandwidth();
    if l_max > bandwidth {
        return Err(Error::BandwidthExceeded {
            requested: l_max,
            bandwidth,
        });
    }
    let n_az = grid.n_azimuth;
    let dphi = 2.0 * PI / n_az as f64;
    let (cos_t, sin_t) = trig_table(grid, l_max);
    let per_ring = par::map_range(grid.n_polar, |i| {
        let row = &values[i * n_az..(i + 1) * n_az];
        let table = AssocLegendre::new(l_max, grid.z[i]);
        let w = grid.polar_weights[i] * dphi;
        let mut out = vec![0.0; sh_count(l_max)];
        for m in 0..=l_max {
            let (mut c, mut s) = (0.0, 0.0);
            for j in 0..n_az {
                c += row[j] * cos_t[m * n_az + j];
                s += row[j] * sin_t[m * n_az + j];
            }
            for k in m..=l_max {
                let p = table.get(k, m) * w;
                if m == 0 {
                    out[sh_index(k, 0)] += p * c;
                } else {
                    out[sh_index(k, m as i64)] += SQRT_2 * p * c;
                    out[sh_index(k, -(m as i64))] += SQRT_2 * p * s;
                }
            }
        }
        out
    });
    let mut spec = HarmonicSpectrum::zeros(l_max);
    for ring in per_ring {
        for (a, b) in spec.coeffs.iter_mut().zip(ring) {
            *a += b;
        }
    }
    Ok(spec)
}

/// Harmonic coefficients `a_{k,m} = ∫ f Y_{k,m}` up to `l_max`.
pub fn analyze(f: &SphericalFunction, l_max: usize) -> Result<HarmonicSpectrum> {
    analyze_values(&f.grid, &f.values, l_max)
}

/// Node values of `Σ a_{k,m} Y_{k,m}`.
pub fn synthesize_values(s: &HarmonicSpectrum, grid: &SphereGrid) -> Vec<f64> {
    let l = s.l_max;
    let n_az = grid.n_azimuth;
    let (cos_t, sin_t) = trig_table(grid, l);
    let rows = par::map_range(grid.n_polar, |i| {
        let table = AssocLegendre::new(l, grid.z[i]);
        let mut a = vec![0.0; l + 1];
        let mut b = vec![0.0; l + 1];
        for m in 0..=l {
            for k in m..=l {
                let p = table.get(k, m);
                if m == 0 {
                    a[0] += s.get(k, 0) * p;
                } else {
                    a[m] += SQRT_2 * s.get(k, m as i64) * p;
                    b[m] += SQRT_2 * s.get(k, -(m as i64)) * p;
                }
            }
        }
        let mut row = vec![0.0; n_az];
        for (j, v) in row.iter_mut().enumerate() {
            let mut acc = a[0];
            for m in 1..=l {
                acc += a[m] * cos_t[m * n_az + j] + b[m] * sin_t[m * n_az + j];
            }
            *v = acc;
        }
        row
    });
    rows.concat()
}

/// Evaluate a spectrum on the nodes of `grid`; the result carries the spectrum.
pub fn synthesize(s: &HarmonicSpectrum, grid: &Arc<SphereGrid>) -> SphericalFunction {
    let mut f = SphericalFunction::new(grid.clone(), synthesize_values(s, grid));
    f.spectrum = Some(s.clone());
    f
}

/// `(∫_{S²} |f|^p)^{1/p}` by quadrature.
pub fn lp_norm_sphere(f: &SphericalFunction, p: f64) -> f64 {
    lp_norm_values(&f.grid, &f.values, p)
}

pub(crate) fn lp_norm_values(grid: &SphereGrid, values: &[f64], p: f64) -> f64 {
    let s: f64 = values
        .iter()
        .zip(grid.weights())
        .map(|(v, w)| w * v.abs().powf(p))
        .sum();
    s.powf(1.0 / p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReverseHolder {
    /// `‖hw‖₁ − ‖h‖_{1/r}·‖w‖_{−1/(r−1)}`.
    pub margin: f64,
    pub holds: bool,
}

/// Check the reverse Hölder inequality `‖hw‖₁ ≥ ‖h‖_{1/r} ‖w‖_{−1/(r−1)}` for
/// non-negative `h`, `w` and `r > 1`.
pub fn reverse_holder_check(
    h: &SphericalFunction,
    w: &SphericalFunction,
    r: f64,
) -> Result<ReverseHolder> {
    if !(r > 1.0) {
        return Err(Error::OutOfRange("reverse Hölder exponent must exceed 1"));
    }
    let ih = h.integral();
    let iw = w.integral();
    if ih <= 0.0 || iw <= 0.0 {
        return Err(Error::DegenerateInput("both factors need a positive integral"));
    }
    let grid = &h.grid;
    let lhs: f64 = h
        .values
        .iter()
        .zip(&w.values)
        .zip(grid.weights())
        .map(|((a, b), q)| q * (a * b).abs())
        .sum();
    let nh = lp_norm_values(grid, &h.values, 1.0 / r);
    let nw = lp_norm_values(grid, &w.values, -1.0 / (r - 1.0));
    let rhs = nh * nw;
    let margin = lhs - rhs;
    let tol = 1e-10 * lhs.abs().max(rhs.abs());
    Ok(ReverseHolder {
        margin,
        holds: margin >= -tol,
    })
}


/// Refine a grid extremum of a band-limited function by Newton steps in the
/// tangent plane. `sign = 1` seeks a maximum, `sign = -1` a minimum; the
/// returned value is the function value itself.
pub(crate) fn polish_extremum(spec: &HarmonicSpectrum, start: Vec3, sign: f64) -> (Vec3, f64) {
    let f = |v: &Vec3| sign * spec.eval(&normalize(*v));
    let mut u = start;
    let mut best = f(&u);
    for _ in 0..8 {
        let (e1, e2) = orthonormal_frame(&u);
        let at = |a: f64, b: f64| {
            f(&[
                u[0] + a * e1[0] + b * e2[0],
                u[1] + a * e1[1] + b * e2[1],
                u[2] + a * e1[2] + b * e2[2],
            ])
        };
        let h = 1e-3;
        let f0 = best;
        let ga = (at(h, 0.0) - at(-h, 0.0)) / (2.0 * h);
        let gb = (at(0.0, h) - at(0.0, -h)) / (2.0 * h);
        let haa = (at(h, 0.0) - 2.0 * f0 + at(-h, 0.0)) / (h * h);
        let hbb = (at(0.0, h) - 2.0 * f0 + at(0.0, -h)) / (h * h);
        let hab = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
        let det = haa * hbb - hab * hab;
        if !(det.abs() > 0.0 && det.is_finite()) {
            break;
        }
        let da = -(hbb * ga - hab * gb) / det;
        let db = -(haa * gb - hab * ga) / det;
        if !(da.abs() < 0.5 && db.abs() < 0.5) {
            break;
        }
        let v = normalize([
            u[0] + da * e1[0] + db * e2[0],
            u[1] + da * e1[1] + db * e2[1],
            u[2] + da * e1[2] + db * e2[2],
        ]);
        let fv = f(&v);
        if !(fv > f0) {
            break;
        }
        u = v;
        best = fv;
    }
    (u, sign * best)
}
