//! Functions on R³ written as finite sums of radial profiles times spherical
//! factors, `x ↦ Σ_j u_j(|x|) ℓ_j(x/|x|)`, optionally carrying closed forms.
//!
//! Fourier and Radon transforms of a term follow from Funk–Hecke: with
//! `ℓ_k` the degree-`k` part of `ℓ`,
//! `f̂(ρθ) = Σ_k 4π(−1)^{k/2} ℓ_k(θ) ∫ u(s) j_k(ρs) s² ds` and
//! `Rf(t,θ) = Σ_k ℓ_k(θ) · 2π ∫_{|t|}^∞ u(r) P_k(t/r) r dr`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::quad::{lagrange4, GaussRule};
use crate::special::{legendre_all, spherical_bessel_j};
use crate::sphere::{analyze_values, HarmonicSpectrum, SphereGrid, SphericalFunction};
use crate::{par, Error, PointFn, Result, Vec3};

/// Shared scalar function of one variable.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Shared function of `(s, θ)`, used for rays `r ↦ f̂(rθ)` and sinograms.
pub type RayFn = Arc<dyn Fn(f64, &Vec3) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// Faster than any power; the profile vanishes beyond its grid.
    Schwartz,
    /// `|u(r)| ~ r^{-order}` at infinity.
    Algebraic { order: f64 },
}

/// Samples `u(r_i)` on a uniform grid of `[0, r_max]`, with an optional exact
/// evaluator that takes precedence.
#[derive(Clone)]
pub struct RadialProfile {
    pub r_max: f64,
    pub samples: Vec<f64>,
    pub decay: Decay,
    pub exact: Option<ScalarFn>,
}

impl core::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("RadialProfile")
            .field("r_max", &self.r_max)
            .field("n", &self.samples.len())
            .field("decay", &self.decay)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl RadialProfile {
    pub fn from_fn(u: ScalarFn, r_max: f64, n: usize, decay: Decay) -> Self {
        let dr = r_max / (n - 1) as f64;
        let samples = (0..n).map(|i| u(i as f64 * dr)).collect();
        RadialProfile {
            r_max,
            samples,
            decay,
            exact: Some(u),
        }
    }

    pub fn from_samples(samples: Vec<f64>, r_max: f64, decay: Decay) -> Self {
        RadialProfile {
            r_max,
            samples,
            decay,
            exact: None,
        }
    }

    pub fn dr(&self) -> f64 {
        self.r_max / (self.samples.len() - 1) as f64
    }

    pub fn eval(&self, r: f64) -> f64 {
        if let Some(u) = &self.exact {
            return u(r);
        }
        if r > self.r_max {
            return 0.0;
        }
        lagrange4(&self.samples, 0.0, self.dr(), r)
    }

    /// For Schwartz profiles, `|u(r_max)| ≤ 1e−8·max|u|`.
    pub fn captures_support(&self) -> bool {
        match self.decay {
            Decay::Schwartz => {
                let last = self.samples.last().copied().unwrap_or(0.0).abs();
                last <= 1e-8 * crate::max_abs(&self.samples)
            }
            Decay::Algebraic { .. } => true,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.samples.iter_mut().for_each(|v| *v *= c);
        if let Some(u) = self.exact.clone() {
            out.exact = Some(Arc::new(move |r| c * u(r)));
        }
        out
    }
}

/// One separable term `u(|x|) ℓ(x/|x|)`; `ℓ` must carry its spectrum.
#[derive(Debug, Clone)]
pub struct SeparableTerm {
    pub profile: RadialProfile,
    pub angular: SphericalFunction,
}

impl SeparableTerm {
    /// A term with constant angular factor 1.
    pub fn radial(profile: RadialProfile, grid: &Arc<SphereGrid>) -> Self {
        SeparableTerm {
            profile,
            angular: SphericalFunction::constant(grid, 1.0),
        }
    }

    fn spectrum(&self) -> &HarmonicSpectrum {
        self.angular
            .spectrum
            .as_ref()
            .expect("angular factors of separable terms carry a spectrum")
    }

    pub fn is_radial(&self) -> bool {
        self.spectrum().l_max == 0
    }

    pub fn eval(&self, x: &Vec3) -> f64 {
        let r = crate::dot(x, x).sqrt();
        let u = self.profile.eval(r);
        if u == 0.0 {
            return 0.0;
        }
        let s = self.spectrum();
        if s.l_max == 0 {
            return u * s.coeffs[0] / (4.0 * PI).sqrt();
        }
        let dir = if r > 0.0 { [x[0] / r, x[1] / r, x[2] / r] } else { [0.0, 0.0, 1.0] };
        u * s.eval(&dir)
    }
}

/// Closed forms attached to a function on R³.
#[derive(Clone, Default)]
pub struct ClosedForms {
    pub spatial: Option<PointFn>,
    /// `(r, θ) ↦ f̂(rθ)`.
    pub fourier_ray: Option<RayFn>,
    /// `(t, θ) ↦ Rf(t, θ)`.
    pub radon: Option<RayFn>,
}

/// A finite sum of separable terms on R³, optionally with closed forms.
#[derive(Clone)]
pub struct SeparableFunction {
    pub label: String,
    pub terms: Vec<SeparableTerm>,
    pub closed: ClosedForms,
    /// The function is radial.
    pub isotropic: bool,
    /// Radius beyond which the function is negligible (or its decay governs).
    pub extent: f64,
    pub decay: Decay,
    /// `(base, q)` when this function is `base^q` and not otherwise separable.
    pub power_of: Option<(Arc<SeparableFunction>, f64)>,
}

impl core::fmt::Debug for SeparableFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SeparableFunction")
            .field("label", &self.label)
            .field("terms", &self.terms.len())
            .field("isotropic", &self.isotropic)
            .field("extent", &self.extent)
            .field("decay", &self.decay)
            .finish()
    }
}

fn sum_opt<T: ?Sized>(
    a: &Option<Arc<T>>,
    b: &Option<Arc<T>>,
) -> Option<(Arc<T>, Arc<T>)> {
    match (a, b) {
        (Some(a), Some(b)) => Some((a.clone(), b.clone())),
        _ => None,
    }
}

impl SeparableFunction {
    pub fn from_terms(label: &str, terms: Vec<SeparableTerm>) -> Self {
        let isotropic = terms.iter().all(|t| t.is_radial());
        let extent = terms.iter().map(|t| t.profile.r_max).fold(0.0, f64::max);
        let decay = terms
            .iter()
            .map(|t| t.profile.decay)
            .fold(Decay::Schwartz, slower_decay);
        SeparableFunction {
            label: String::from(label),
            terms,
            closed: ClosedForms::default(),
            isotropic,
            extent,
            decay,
            power_of: None,
        }
    }

    /// A function known only through closed forms.
    pub fn closed(label: &str, closed: ClosedForms, isotropic: bool, extent: f64, decay: Decay) -> Self {
        SeparableFunction {
            label: String::from(label),
            terms: Vec::new(),
            closed,
            isotropic,
            extent,
            decay,
            power_of: None,
        }
    }

    pub fn with_closed(mut self, closed: ClosedForms) -> Self {
        self.closed = closed;
        self
    }

    pub fn eval(&self, x: &Vec3) -> f64 {
        if let Some(f) = &self.closed.spatial {
            return f(x);
        }
        if let Some((base, q)) = &self.power_of {
            return base.eval(x).powf(*q);
        }
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    /// True when the separable terms alone represent the function.
    pub fn terms_complete(&self) -> bool {
        self.power_of.is_none() && (!self.terms.is_empty() || self.closed.spatial.is_none())
    }

    /// `c·self`.
    pub fn scaled(&self, c: f64) -> Self {
        self.combine(1.0, None, c)
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: f64, other: &SeparableFunction, b: f64) -> Self {
        self.combine(a, Some((other, b)), 1.0)
    }

    fn combine(&self, a: f64, other: Option<(&SeparableFunction, f64)>, outer: f64) -> Self {
        let a = a * outer;
        let mut terms: Vec<SeparableTerm> = self
            .terms
            .iter()
            .map(|t| SeparableTerm {
                profile: t.profile.scaled(a),
                angular: t.angular.clone(),
            })
            .collect();
        let mut closed = ClosedForms::default();
        let mut label = self.label.clone();
        let (mut isotropic, mut extent, mut decay) = (self.isotropic, self.extent, self.decay);
        let mut power_of = None;
        match other {
            None => {
                if let Some(f) = self.closed.spatial.clone() {
                    closed.spatial = Some(Arc::new(move |x| a * f(x)));
                }
                if let Some(f) = self.closed.fourier_ray.clone() {
                    closed.fourier_ray = Some(Arc::new(move |r, u| a * f(r, u)));
                }
                if let Some(f) = self.closed.radon.clone() {
                    closed.radon = Some(Arc::new(move |t, u| a * f(t, u)));
                }
                if let Some((base, q)) = &self.power_of {
                    // c·b^q = (c^{1/q} b)^q keeps the power form for c > 0
                    if a > 0.0 {
                        power_of = Some((Arc::new(base.scaled(a.powf(1.0 / q))), *q));
                    }
                }
            }
            Some((o, b)) => {
                let b = b * outer;
                terms.extend(o.terms.iter().map(|t| SeparableTerm {
                    profile: t.profile.scaled(b),
                    angular: t.angular.clone(),
                }));
                if let Some((f, g)) = sum_opt(&self.closed.spatial, &o.closed.spatial) {
                    closed.spatial = Some(Arc::new(move |x| a * f(x) + b * g(x)));
                }
                if let Some((f, g)) = sum_opt(&self.closed.fourier_ray, &o.closed.fourier_ray) {
                    closed.fourier_ray = Some(Arc::new(move |r, u| a * f(r, u) + b * g(r, u)));
                }
                if let Some((f, g)) = sum_opt(&self.closed.radon, &o.closed.radon) {
                    closed.radon = Some(Arc::new(move |t, u| a * f(t, u) + b * g(t, u)));
                }
                label = alloc::format!("{}{:+}·{}", self.label, b, o.label);
                isotropic &= o.isotropic;
                extent = extent.max(o.extent);
                decay = slower_decay(decay, o.decay);
            }
        }
        // pieces known only in closed form cannot be combined term-wise
        if !self.terms_complete() || other.is_some_and(|(o, _)| !o.terms_complete()) {
            if closed.spatial.is_none() {
                // fall back to pointwise evaluation through a closure
                let s = self.clone();
                let o = other.map(|(o, b)| (o.clone(), b * outer));
                closed.spatial = Some(Arc::new(move |x| {
                    a * s.eval(x) + o.as_ref().map_or(0.0, |(o, b)| b * o.eval(x))
                }));
            }
            if power_of.is_none() {
                terms.clear();
            }
        }
        SeparableFunction {
            label,
            terms,
            closed,
            isotropic,
            extent,
            decay,
            power_of,
        }
    }

    /// Pointwise power `self^q` (for non-negative functions).
    ///
    /// Single-term functions stay separable; `q = 1` returns a clone.
    pub fn pow(&self, q: f64) -> Self {
        if (q - 1.0).abs() < 1e-12 {
            return self.clone();
        }
        if let Some((base, q0)) = &self.power_of {
            if (q * q0 - 1.0).abs() < 1e-12 {
                return (**base).clone();
            }
            let mut out = (**base).pow(q * q0);
            out.label = alloc::format!("({})^{}", self.label, q);
            return out;
        }
        let decay = match self.decay {
            Decay::Schwartz if q > 0.0 => Decay::Schwartz,
            Decay::Algebraic { order } if q > 0.0 => Decay::Algebraic { order: order * q },
            _ => Decay::Algebraic { order: 0.0 },
        };
        let spatial = self.closed.spatial.clone().map(|f| -> PointFn {
            Arc::new(move |x| f(x).powf(q))
        });
        if self.terms.len() == 1 {
            let t = &self.terms[0];
            let u = t.profile.clone();
            let n = t.profile.samples.len();
            let profile = RadialProfile::from_fn(
                Arc::new(move |r| u.eval(r).powf(q)),
                t.profile.r_max,
                n,
                decay,
            );
            let grid = t.angular.grid.clone();
            let l = t.spectrum().l_max;
            let mut angular = t.angular.powf(q);
            if l == 0 {
                angular = SphericalFunction::constant(&grid, t.spectrum().coeffs[0].powf(q) / (4.0 * PI).powf(0.5 * q));
            } else {
                let lp = (2 * l).min(grid.bandwidth());
                angular.spectrum = analyze_values(&grid, &angular.values, lp).ok().map(|s| s.even_part());
            }
            let mut out = SeparableFunction::from_terms(&alloc::format!("({})^{}", self.label, q), vec![SeparableTerm { profile, angular }]);
            out.closed.spatial = spatial;
            out.isotropic = self.isotropic;
            out.extent = self.extent;
            out.decay = decay;
            return out;
        }
        let base = Arc::new(self.clone());
        let b = base.clone();
        SeparableFunction {
            label: alloc::format!("({})^{}", self.label, q),
            terms: Vec::new(),
            closed: ClosedForms {
                spatial: Some(spatial.unwrap_or_else(|| Arc::new(move |x| b.eval(x).powf(q)))),
                fourier_ray: None,
                radon: None,
            },
            isotropic: self.isotropic,
            extent: self.extent,
            decay,
            power_of: Some((base, q)),
        }
    }

    /// Re-express any evaluable function as separable terms by harmonic
    /// analysis on `n_shells` radial shells of `[0, extent]`.
    pub fn expand(&self, grid: &Arc<SphereGrid>, l_max: usize, n_shells: usize) -> Result<Self> {
        let r_max = self.extent;
        let dr = r_max / (n_shells - 1) as f64;
        let nodes = grid.nodes();
        let shells = par::map_range(n_shells, |i| {
            let r = i as f64 * dr;
            let vals: Vec<f64> = nodes
                .iter()
                .map(|u| self.eval(&[r * u[0], r * u[1], r * u[2]]))
                .collect();
            analyze_values(grid, &vals, l_max)
        });
        let shells = shells.into_iter().collect::<Result<Vec<_>>>()?;
        let n_coeffs = shells[0].coeffs.len();
        let scale = shells
            .iter()
            .map(|s| s.max_abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut terms = Vec::new();
        for c in 0..n_coeffs {
            let k = (c as f64).sqrt() as usize;
            if k % 2 == 1 {
                continue;
            }
            let samples: Vec<f64> = shells.iter().map(|s| s.coeffs[c]).collect();
            if crate::max_abs(&samples) <= 1e-13 * scale {
                continue;
            }
            let mut spec = HarmonicSpectrum::zeros(k);
            spec.coeffs[c] = 1.0;
            let angular = crate::sphere::synthesize(&spec, grid);
            terms.push(SeparableTerm {
                profile: RadialProfile::from_samples(samples, r_max, self.decay),
                angular,
            });
        }
        let mut out = SeparableFunction::from_terms(&self.label, terms);
        out.closed.spatial = self.closed.spatial.clone();
        out.isotropic = self.isotropic;
        out.decay = self.decay;
        Ok(out)
    }

    /// Separable terms for a function known only pointwise: a single radial
    /// term with the exact evaluator when isotropic, else a shell expansion.
    fn as_terms(&self) -> Result<Self> {
        if self.isotropic {
            let me = self.clone();
            let u: ScalarFn = Arc::new(move |r| me.eval(&[0.0, 0.0, r]));
            let profile = RadialProfile::from_fn(u, self.extent, 4097, self.decay);
            let grid = Arc::new(crate::sphere::build_grid(2, 4)?);
            let mut out = SeparableFunction::from_terms(&self.label, vec![SeparableTerm::radial(profile, &grid)]);
            out.closed.spatial = self.closed.spatial.clone();
            out.decay = self.decay;
            return Ok(out);
        }
        let grid = Arc::new(crate::sphere::build_grid(24, 48)?);
        self.expand(&grid, 16, 1025)
    }

    /// Whether hyperplane integrals converge.
    pub fn hyperplane_integrable(&self) -> bool {
        match self.decay {
            Decay::Schwartz => true,
            Decay::Algebraic { order } => order > 2.0,
        }
    }

    /// `f̂(r_j θ_d)` for all pairs, row-major by direction.
    pub fn fourier_rays(&self, r: &[f64], dirs: &[Vec3]) -> Result<Vec<Vec<f64>>> {
        if let Some(f) = &self.closed.fourier_ray {
            return Ok(par::map_range(dirs.len(), |d| r.iter().map(|&x| f(x, &dirs[d])).collect()));
        }
        if self.terms.is_empty() {
            return Err(Error::NotEvaluable("no Fourier representation available"));
        }
        if matches!(self.decay, Decay::Algebraic { order } if order <= 3.0) {
            return Err(Error::NotEvaluable(
                "profile decays too slowly for a numeric radial Fourier transform",
            ));
        }
        let tables: Vec<Vec<Vec<f64>>> = self.terms.iter().map(|t| hankel_table(t, r)).collect();
        Ok(par::map_range(dirs.len(), |d| {
            let mut out = vec![0.0; r.len()];
            for (t, table) in self.terms.iter().zip(&tables) {
                let s = t.spectrum();
                for (k, row) in table.iter().enumerate() {
                    let lk = if s.l_max == 0 { s.coeffs[0] / (4.0 * PI).sqrt() } else { s.eval_degree(k, &dirs[d]) };
                    if lk == 0.0 {
                        continue;
                    }
                    let c = 4.0 * PI * if (k / 2) % 2 == 0 { 1.0 } else { -1.0 } * lk;
                    for (o, v) in out.iter_mut().zip(row) {
                        *o += c * v;
                    }
                }
            }
            out
        }))
    }

    /// `Rf(t_j, θ_d)` for all pairs, row-major by direction.
    pub fn radon_rows(&self, t: &[f64], dirs: &[Vec3], prefer_closed: bool) -> Result<Vec<Vec<f64>>> {
        if prefer_closed || self.terms.is_empty() {
            if let Some(f) = &self.closed.radon {
                return Ok(par::map_range(dirs.len(), |d| t.iter().map(|&x| f(x, &dirs[d])).collect()));
            }
        }
        if !self.hyperplane_integrable() {
            return Err(Error::DecayTooSlow);
        }
        if self.terms.is_empty() {
            if self.closed.spatial.is_none() && self.power_of.is_none() {
                return Err(Error::NotEvaluable("no separable terms for the polar Radon route"));
            }
            return self.as_terms()?.radon_rows(t, dirs, false);
        }
        let tables: Vec<Vec<Vec<f64>>> = self.terms.iter().map(|term| abel_table(term, t)).collect();
        Ok(par::map_range(dirs.len(), |d| {
            let mut out = vec![0.0; t.len()];
            for (term, table) in self.terms.iter().zip(&tables) {
                let s = term.spectrum();
                for (k, row) in table.iter().enumerate() {
                    let lk = if s.l_max == 0 { s.coeffs[0] / (4.0 * PI).sqrt() } else { s.eval_degree(k, &dirs[d]) };
                    if lk == 0.0 {
                        continue;
                    }
                    for (o, v) in out.iter_mut().zip(row) {
                        *o += lk * v;
                    }
                }
            }
            out
        }))
    }
}

fn slower_decay(a: Decay, b: Decay) -> Decay {
    match (a, b) {
        (Decay::Schwartz, x) | (x, Decay::Schwartz) => x,
        (Decay::Algebraic { order: p }, Decay::Algebraic { order: q }) => Decay::Algebraic { order: p.min(q) },
    }
}

/// `H_k(ρ) = ∫_0^{r_max} u(s) j_k(ρs) s² ds` for even `k ≤ l_max` of the term.
fn hankel_table(term: &SeparableTerm, rho: &[f64]) -> Vec<Vec<f64>> {
    let l = term.spectrum().l_max;
    let rule = GaussRule::new(12);
    let r_max = term.profile.r_max;
    let rows = par::map_range(rho.len(), |j| {
        let p = rho[j].abs();
        let width = if p > 0.0 { (1.5 / p).min(0.5) } else { 0.5 };
        let panels = (r_max / width).ceil() as usize;
        let (xs, ws) = rule.composite(0.0, r_max, panels);
        let mut out = vec![0.0; l + 1];
        for (x, w) in xs.iter().zip(&ws) {
            let u = term.profile.eval(*x) * x * x * w;
            if u == 0.0 {
                continue;
            }
            for k in (0..=l).step_by(2) {
                out[k] += u * spherical_bessel_j(k, p * x);
            }
        }
        out
    });
    // transpose to [k][j]
    (0..=l)
        .map(|k| rows.iter().map(|r| r[k]).collect())
        .collect()
}

/// `A_k(t) = 2π ∫_{|t|}^{r_max} u(r) P_k(t/r) r dr` for even `k ≤ l_max`.
fn abel_table(term: &SeparableTerm, t: &[f64]) -> Vec<Vec<f64>> {
    let l = term.spectrum().l_max;
    let rule = GaussRule::new(16);
    let r_max = term.profile.r_max;
    let rows = par::map_range(t.len(), |j| {
        let a = t[j].abs();
        let mut out = vec![0.0; l + 1];
        if a >= r_max {
            return out;
        }
        // substitute r = sqrt(a² + ρ²) so the integrand is smooth at r = |t|
        let rho_max = (r_max * r_max - a * a).sqrt();
        let (xs, ws) = rule.graded(0.0, rho_max, 0.25, 0.05);
        for (rho, w) in xs.iter().zip(&ws) {
            let r = (a * a + rho * rho).sqrt();
            let u = term.profile.eval(r) * rho * w;
            if u == 0.0 {
                continue;
            }
            let p = legendre_all(l, t[j] / r);
            for k in (0..=l).step_by(2) {
                out[k] += 2.0 * PI * u * p[k];
            }
        }
        out
    });
    (0..=l)
        .map(|k| rows.iter().map(|r| r[k]).collect())
        .collect()
}
