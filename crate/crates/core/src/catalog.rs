//! Closed-form example functions on R³.
//!
//! The intersection-function families are parameterised by a profile
//! `h_θ(r)` along rays: each entry `f` satisfies `r² f̂(rθ) = 8π² h_θ(r)`, and
//! `f(x) = ∫_{S²} g(⟨x,θ⟩, θ) dθ` for the dual datum `g = ĥ_θ/(2π)`, where
//! `ĥ_θ(t) = ∫ h_θ(r) e^{−irt} dr`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::quad::{adaptive, lagrange4, GaussRule};
use crate::radial::{ClosedForms, Decay, RadialProfile, RayFn, ScalarFn, SeparableFunction, SeparableTerm};
use crate::radon::RELATION_CONSTANT;
use crate::special::{erf, legendre, ln_gamma};
use crate::sphere::{build_grid, HarmonicSpectrum, SphereGrid, SphericalFunction};
use crate::{dot, Error, PointFn, Result, Vec3};

/// `e^{−a|x|²}`.
pub fn gaussian(a: f64, grid: &Arc<SphereGrid>) -> Result<SeparableFunction> {
    if !(a > 0.0) {
        return Err(Error::OutOfRange("Gaussian rate must be positive"));
    }
    // e^{-80} keeps powers down to 1/4 accurate
    let r_max = (80.0 / a).sqrt();
    let profile = RadialProfile::from_fn(Arc::new(move |r| (-a * r * r).exp()), r_max, 1025, Decay::Schwartz);
    let closed = ClosedForms {
        spatial: Some(Arc::new(move |x: &Vec3| (-a * dot(x, x)).exp())),
        fourier_ray: Some(Arc::new(move |r, _: &Vec3| (PI / a).powf(1.5) * (-r * r / (4.0 * a)).exp())),
        radon: Some(Arc::new(move |t, _: &Vec3| PI / a * (-a * t * t).exp())),
    };
    let mut f = SeparableFunction::from_terms(&format!("exp(-{a}|x|^2)"), alloc::vec![SeparableTerm::radial(profile, grid)])
        .with_closed(closed);
    f.extent = r_max;
    Ok(f)
}

/// Indicator of the ball of radius `radius` convolved with a normalised
/// Gaussian of standard deviation `sigma`.
pub fn mollified_ball(radius: f64, sigma: f64, grid: &Arc<SphereGrid>) -> Result<SeparableFunction> {
    if !(radius > 0.0 && sigma > 0.0) {
        return Err(Error::OutOfRange("radius and width must be positive"));
    }
    let (big_r, s) = (radius, sigma);
    let u: ScalarFn = Arc::new(move |r| mollified_ball_profile(big_r, s, r));
    let r_max = big_r + 12.0 * s;
    let profile = RadialProfile::from_fn(u.clone(), r_max, 4097, Decay::Schwartz);
    let closed = ClosedForms {
        spatial: Some(Arc::new(move |x: &Vec3| u(dot(x, x).sqrt()))),
        fourier_ray: Some(Arc::new(move |k, _: &Vec3| {
            let gauss = (-0.5 * s * s * k * k).exp();
            let kr = k * big_r;
            if kr.abs() < 1e-3 {
                // series of 4π(sin x − x cos x)/k³
                let x2 = kr * kr;
                4.0 * PI * big_r.powi(3) * (1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0) * gauss
            } else {
                4.0 * PI * (kr.sin() - kr * kr.cos()) / (k * k * k) * gauss
            }
        })),
        radon: Some(Arc::new(move |t, _: &Vec3| mollified_disc_area(big_r, s, t))),
    };
    let mut f = SeparableFunction::from_terms(
        &format!("ball({radius};{sigma})"),
        alloc::vec![SeparableTerm::radial(profile, grid)],
    )
    .with_closed(closed);
    f.extent = r_max;
    Ok(f)
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * crate::special::erfc(-x / core::f64::consts::SQRT_2)
}

/// `(χ_{B_R} ∗ G_σ)(r)` for the radial coordinate `r`.
pub fn mollified_ball_profile(big_r: f64, s: f64, r: f64) -> f64 {
    let a = (big_r - r) / (core::f64::consts::SQRT_2 * s);
    let b = (big_r + r) / (core::f64::consts::SQRT_2 * s);
    let base = 0.5 * (erf(a) + erf(b));
    if r < 1e-8 * s {
        let e = (-big_r * big_r / (2.0 * s * s)).exp();
        return base - 2.0 * big_r * e / (s * (2.0 * PI).sqrt());
    }
    let c = s / (r * (2.0 * PI).sqrt());
    let d = (-(big_r - r).powi(2) / (2.0 * s * s)).exp() - (-(big_r + r).powi(2) / (2.0 * s * s)).exp();
    base - c * d
}

/// Hyperplane integral of the mollified ball at offset `t`:
/// `π[(R² − t²)P₀ − 2tσP₁ − σ²P₂]` with the Gaussian moments over `[−R, R]`.
fn mollified_disc_area(big_r: f64, s: f64, t: f64) -> f64 {
    let a = (-big_r - t) / s;
    let b = (big_r - t) / s;
    let p0 = normal_cdf(b) - normal_cdf(a);
    let p1 = normal_pdf(a) - normal_pdf(b);
    let p2 = p0 + a * normal_pdf(a) - b * normal_pdf(b);
    PI * ((big_r * big_r - t * t) * p0 - 2.0 * t * s * p1 - s * s * p2)
}

/// An intersection-function family together with its dual datum.
#[derive(Clone)]
pub struct CatalogEntry {
    pub name: String,
    /// The function `f` on R³.
    pub f: SeparableFunction,
    /// `h_θ(r)`, with `r² f̂(rθ) = 8π² h_θ(r)`.
    pub h: RayFn,
    /// `g(t,θ) = ĥ_θ(t)/(2π)`, the datum whose dual Radon transform is `f`.
    pub g: RayFn,
    /// `ĥ_θ(t)`.
    pub h_hat: RayFn,
    /// Whether `f` is an intersection function (`ĥ_θ ≥ 0`).
    pub expected_intersection: bool,
}

impl core::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("expected_intersection", &self.expected_intersection)
            .finish()
    }
}

/// Catalog names accepted by [`by_name`].
pub const NAMES: [&str; 5] = ["gauss-r2", "erf-type", "exp-ell", "cauchy-ell", "gamma-q"];

/// Parameters of a catalog entry; unused fields are ignored.
#[derive(Debug, Clone)]
pub struct CatalogParams {
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
    /// Even, strictly positive angular factor carrying its spectrum.
    pub ell: SphericalFunction,
}

impl CatalogParams {
    pub fn isotropic(grid: &Arc<SphereGrid>) -> Self {
        CatalogParams {
            alpha: 1.0,
            beta: 1.0,
            q: 1.0,
            ell: SphericalFunction::constant(grid, 1.0),
        }
    }
}

pub fn by_name(name: &str, p: &CatalogParams) -> Result<CatalogEntry> {
    match name {
        "gauss-r2" => gauss_r2(p.alpha, &p.ell),
        "erf-type" => erf_type(p.alpha, p.beta, &p.ell),
        "exp-ell" => exp_ell(&p.ell),
        "cauchy-ell" => cauchy_ell(&p.ell),
        "gamma-q" => gamma_q(p.q, &p.ell),
        _ => Err(Error::InputInvalid(format!("unknown catalog entry `{name}`"))),
    }
}

/// Validated view of an angular factor.
struct Ell {
    spec: HarmonicSpectrum,
    constant: Option<f64>,
    grid: Arc<SphereGrid>,
}

impl Ell {
    fn new(ell: &SphericalFunction) -> Result<Self> {
        let min = ell.min();
        if !(min > 0.0) {
            return Err(Error::NotPositive { min });
        }
        let spec = match &ell.spectrum {
            Some(s) => s.clone(),
            None => {
                let l = ell.grid.bandwidth().min(32);
                crate::sphere::analyze(ell, l)?
            }
        };
        if !spec.is_even() {
            return Err(Error::ParityViolation { max_odd: spec.max_odd() });
        }
        // drop negligible top degrees; evaluation cost grows with l_max²
        let peak = spec.max_abs();
        let top = (0..=spec.l_max)
            .rev()
            .find(|&k| spec.coeffs[k * k..(k + 1) * (k + 1)].iter().any(|v| v.abs() > 1e-15 * peak))
            .unwrap_or(0);
        let spec = spec.resized(top);
        let a00 = spec.coeffs[0];
        let rest = spec.coeffs[1..].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let constant = (rest <= 1e-13 * a00.abs()).then(|| a00 / (4.0 * PI).sqrt());
        Ok(Ell {
            spec,
            constant,
            grid: ell.grid.clone(),
        })
    }

    fn eval(&self, u: &Vec3) -> f64 {
        match self.constant {
            Some(c) => c,
            None => self.spec.eval(u),
        }
    }
}

/// Build an entry from `h`, `ĥ`, and a spatial evaluator.
fn assemble(
    name: String,
    h: RayFn,
    h_hat: RayFn,
    spatial: PointFn,
    isotropic: bool,
    expected: bool,
    terms: Vec<SeparableTerm>,
) -> CatalogEntry {
    let hf = h.clone();
    let closed = ClosedForms {
        spatial: Some(spatial),
        fourier_ray: Some(Arc::new(move |r, u| RELATION_CONSTANT * hf(r, u) / (r * r))),
        radon: None,
    };
    let mut f = SeparableFunction::closed(&name, closed, isotropic, 16.0, Decay::Algebraic { order: 1.0 });
    f.terms = terms;
    let hh = h_hat.clone();
    CatalogEntry {
        name,
        f,
        h,
        g: Arc::new(move |t, u| hh(t, u) / (2.0 * PI)),
        h_hat,
        expected_intersection: expected,
    }
}

/// Spatial evaluator for `f(x) = ∫ g(⟨x,θ⟩,θ)dθ`: for isotropic data
/// `(4π/|x|) G(|x|)` with `G(s) = ∫_0^s g`, else sphere quadrature.
fn spatial_from_dual(g: RayFn, cumulative: Option<ScalarFn>, quad: Arc<SphereGrid>) -> PointFn {
    match cumulative {
        Some(big_g) => {
            let g0 = g.clone();
            Arc::new(move |x: &Vec3| {
                let s = dot(x, x).sqrt();
                if s < 1e-12 {
                    4.0 * PI * g0(0.0, &[0.0, 0.0, 1.0])
                } else {
                    4.0 * PI * big_g(s) / s
                }
            })
        }
        None => Arc::new(move |x: &Vec3| {
            quad.nodes()
                .iter()
                .zip(quad.weights())
                .map(|(u, w)| w * g(dot(x, u), u))
                .sum()
        }),
    }
}

fn quadrature_grid() -> Arc<SphereGrid> {
    Arc::new(build_grid(48, 96).expect("valid grid"))
}

/// Terms `Σ_k ℓ_k(x̂) p_k(|x|)` of `f(x) = ∫ ℓ(θ) g₀(⟨x,θ⟩) dθ`, where
/// `p_k(s) = (2π/s) ∫_{−s}^{s} g₀(t) P_k(t/s) dt`.
fn product_terms(ell: &Ell, g0: ScalarFn) -> Vec<SeparableTerm> {
    let mut terms = Vec::new();
    for k in (0..=ell.spec.l_max).step_by(2) {
        let mut spec = HarmonicSpectrum::zeros(k);
        let mut any = false;
        for c in k * k..(k + 1) * (k + 1) {
            spec.coeffs[c] = ell.spec.coeffs[c];
            any |= ell.spec.coeffs[c] != 0.0;
        }
        if !any {
            continue;
        }
        let angular = crate::sphere::synthesize(&spec, &ell.grid);
        let g = g0.clone();
        let rule = GaussRule::new(16);
        let p: ScalarFn = Arc::new(move |s: f64| {
            if s < 1e-12 {
                return if k == 0 { 4.0 * PI * g(0.0) } else { 0.0 };
            }
            let panels = (s / 0.25).ceil().max(1.0) as usize;
            let v = rule.integrate_panels(0.0, s, panels, |t| g(t) * legendre(k, t / s));
            4.0 * PI * v / s
        });
        terms.push(SeparableTerm {
            profile: RadialProfile::from_fn(p, 16.0, 65, Decay::Algebraic { order: 1.0 }),
            angular,
        });
    }
    terms
}

/// Example family with `h_θ(r) = α e^{−r² ℓ(θ)}`.
pub fn gauss_r2(alpha: f64, ell: &SphericalFunction) -> Result<CatalogEntry> {
    if !(alpha > 0.0) {
        return Err(Error::OutOfRange("alpha must be positive"));
    }
    let e = Arc::new(Ell::new(ell)?);
    let (e1, e2) = (e.clone(), e.clone());
    let h: RayFn = Arc::new(move |r, u| alpha * (-r * r * e1.eval(u)).exp());
    let h_hat: RayFn = Arc::new(move |t, u| {
        let l = e2.eval(u);
        alpha * (PI / l).sqrt() * (-t * t / (4.0 * l)).exp()
    });
    let cumulative = e.constant.map(|l| -> ScalarFn { Arc::new(move |s| 0.5 * alpha * erf(s / (2.0 * l.sqrt()))) });
    let isotropic = e.constant.is_some();
    let hh = h_hat.clone();
    let g: RayFn = Arc::new(move |t, u| hh(t, u) / (2.0 * PI));
    let spatial = spatial_from_dual(g, cumulative, quadrature_grid());
    Ok(assemble(format!("gauss-r2({alpha})"), h, h_hat, spatial, isotropic, true, Vec::new()))
}

/// Example family with `h_θ(r) = α√(π/β) e^{−r²/(4β)} ℓ(θ)`, dual datum
/// `α ℓ(θ) e^{−βt²}`.
pub fn erf_type(alpha: f64, beta: f64, ell: &SphericalFunction) -> Result<CatalogEntry> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::OutOfRange("alpha and beta must be positive"));
    }
    let e = Arc::new(Ell::new(ell)?);
    let (e1, e2) = (e.clone(), e.clone());
    let c = alpha * (PI / beta).sqrt();
    let h: RayFn = Arc::new(move |r, u| c * (-r * r / (4.0 * beta)).exp() * e1.eval(u));
    let h_hat: RayFn = Arc::new(move |t, u| 2.0 * PI * alpha * e2.eval(u) * (-beta * t * t).exp());
    let g0: ScalarFn = Arc::new(move |t| alpha * (-beta * t * t).exp());
    let (spatial, terms): (PointFn, Vec<SeparableTerm>) = match e.constant {
        Some(l) => {
            let k = 2.0 * PI.powf(1.5) * alpha * l / beta.sqrt();
            let sb = beta.sqrt();
            (
                Arc::new(move |x: &Vec3| {
                    let s = dot(x, x).sqrt();
                    if s * sb < 1e-8 {
                        4.0 * PI * alpha * l
                    } else {
                        k * erf(s * sb) / s
                    }
                }),
                Vec::new(),
            )
        }
        None => {
            let terms = product_terms(&e, g0);
            let t2 = terms.clone();
            (Arc::new(move |x: &Vec3| t2.iter().map(|t| t.eval(x)).sum()), terms)
        }
    };
    let isotropic = e.constant.is_some();
    Ok(assemble(format!("erf-type({alpha},{beta})"), h, h_hat, spatial, isotropic, true, terms))
}

/// Example family with `h_θ(r) = e^{−|r| ℓ(θ)}`, dual datum
/// `ℓ(θ)/(π(t² + ℓ(θ)²))`.
pub fn exp_ell(ell: &SphericalFunction) -> Result<CatalogEntry> {
    let e = Arc::new(Ell::new(ell)?);
    let (e1, e2) = (e.clone(), e.clone());
    let h: RayFn = Arc::new(move |r, u| (-r.abs() * e1.eval(u)).exp());
    let h_hat: RayFn = Arc::new(move |t, u| {
        let l = e2.eval(u);
        2.0 * l / (t * t + l * l)
    });
    let cumulative = e.constant.map(|l| -> ScalarFn { Arc::new(move |s| (s / l).atan() / PI) });
    let hh = h_hat.clone();
    let g: RayFn = Arc::new(move |t, u| hh(t, u) / (2.0 * PI));
    let spatial = spatial_from_dual(g, cumulative, quadrature_grid());
    Ok(assemble(String::from("exp-ell"), h, h_hat, spatial, e.constant.is_some(), true, Vec::new()))
}

/// Example family with `h_θ(r) = ℓ(θ) e^{−|r|}`, dual datum
/// `ℓ(θ)/(π(1 + t²))`.
pub fn cauchy_ell(ell: &SphericalFunction) -> Result<CatalogEntry> {
    let e = Arc::new(Ell::new(ell)?);
    let (e1, e2) = (e.clone(), e.clone());
    let h: RayFn = Arc::new(move |r, u| e1.eval(u) * (-r.abs()).exp());
    let h_hat: RayFn = Arc::new(move |t, u| 2.0 * e2.eval(u) / (1.0 + t * t));
    let (spatial, terms): (PointFn, Vec<SeparableTerm>) = match e.constant {
        Some(l) => (
            Arc::new(move |x: &Vec3| {
                let s = dot(x, x).sqrt();
                if s < 1e-12 {
                    4.0 * l
                } else {
                    4.0 * l * s.atan() / s
                }
            }),
            Vec::new(),
        ),
        None => {
            let terms = product_terms(&e, Arc::new(|t| 1.0 / (PI * (1.0 + t * t))));
            let t2 = terms.clone();
            (Arc::new(move |x: &Vec3| t2.iter().map(|t| t.eval(x)).sum()), terms)
        }
    };
    Ok(assemble(String::from("cauchy-ell"), h, h_hat, spatial, e.constant.is_some(), true, terms))
}

/// `γ_q(t) = ∫ e^{−|r|^q} e^{−irt} dr`, tabulated on `[0, T]` and continued by
/// the asymptotic `2Γ(1+q) sin(πq/2) |t|^{−1−q}` beyond.
#[derive(Debug, Clone)]
pub struct GammaQ {
    pub q: f64,
    t_max: f64,
    values: Vec<f64>,
    cumulative: Vec<f64>,
}

impl GammaQ {
    const STEPS: usize = 4096;

    /// Supported for `q ≥ 1`.
    pub fn new(q: f64) -> Result<Self> {
        if !(q >= 1.0) || !q.is_finite() {
            return Err(Error::OutOfRange("gamma-q is tabulated for q ≥ 1"));
        }
        let t_max = 64.0;
        let h = t_max / Self::STEPS as f64;
        let r_max = 40.0_f64.powf(1.0 / q);
        let rule = GaussRule::new(16);
        let values: Vec<f64> = crate::par::map_range(Self::STEPS + 1, |i| {
            let t = i as f64 * h;
            if q == 1.0 {
                return 2.0 / (1.0 + t * t);
            }
            if q == 2.0 {
                return PI.sqrt() * (-t * t / 4.0).exp();
            }
            let width = if t > 0.0 { (1.0 / t).min(0.25) } else { 0.25 };
            let panels = (r_max / width).ceil() as usize;
            2.0 * rule.integrate_panels(0.0, r_max, panels, |r| (-r.powf(q)).exp() * (r * t).cos())
        });
        let mut cumulative = Vec::with_capacity(values.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in values.windows(2) {
            acc += 0.5 * h * (w[0] + w[1]);
            cumulative.push(acc);
        }
        // refine the trapezoid sums with the end-point correction from
        // one-sided differences (fourth order for smooth γ_q)
        let mut out = GammaQ {
            q,
            t_max,
            values,
            cumulative,
        };
        out.refine_cumulative(h);
        Ok(out)
    }

    fn refine_cumulative(&mut self, h: f64) {
        // Simpson on even indices, averaged interpolation on odd ones
        let v = &self.values;
        let n = v.len();
        let mut c = alloc::vec![0.0; n];
        for i in (2..n).step_by(2) {
            c[i] = c[i - 2] + h / 3.0 * (v[i - 2] + 4.0 * v[i - 1] + v[i]);
        }
        for i in (1..n).step_by(2) {
            // integrate the quadratic through v[i-1], v[i], v[i+1] over [t_{i-1}, t_i]
            let (a, b, d) = (v[i - 1], v[i], if i + 1 < n { v[i + 1] } else { v[i] });
            c[i] = c[i - 1] + h / 12.0 * (5.0 * a + 8.0 * b - d);
        }
        self.cumulative = c;
    }

    fn tail_coefficient(&self) -> f64 {
        let q = self.q;
        2.0 * (ln_gamma(1.0 + q)).exp() * (0.5 * PI * q).sin()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let a = t.abs();
        if a <= self.t_max {
            lagrange4(&self.values, 0.0, self.t_max / Self::STEPS as f64, a)
        } else {
            self.tail_coefficient() * a.powf(-1.0 - self.q)
        }
    }

    /// `∫_0^s γ_q`.
    pub fn integral_to(&self, s: f64) -> f64 {
        let h = self.t_max / Self::STEPS as f64;
        if s <= self.t_max {
            // cumulative table plus the partial last cell
            let i = ((s / h).floor() as usize).min(Self::STEPS - 1);
            let t0 = i as f64 * h;
            let (a, b) = (self.values[i], self.values[i + 1]);
            let x = s - t0;
            self.cumulative[i] + a * x + 0.5 * (b - a) / h * x * x
        } else {
            let q = self.q;
            let tail = self.tail_coefficient() / q * (self.t_max.powf(-q) - s.powf(-q));
            self.cumulative[Self::STEPS] + tail
        }
    }
}

/// Example family with `h_θ(r) = ℓ(θ) e^{−|r|^q}`; an intersection function
/// for `q ≤ 2` and not for `q > 2`.
pub fn gamma_q(q: f64, ell: &SphericalFunction) -> Result<CatalogEntry> {
    let table = Arc::new(GammaQ::new(q)?);
    let e = Arc::new(Ell::new(ell)?);
    let (e1, e2) = (e.clone(), e.clone());
    let h: RayFn = Arc::new(move |r, u| e1.eval(u) * (-r.abs().powf(q)).exp());
    let tb = table.clone();
    let h_hat: RayFn = Arc::new(move |t, u| e2.eval(u) * tb.eval(t));
    let (spatial, terms): (PointFn, Vec<SeparableTerm>) = match e.constant {
        Some(l) => {
            let tb = table.clone();
            (
                Arc::new(move |x: &Vec3| {
                    let s = dot(x, x).sqrt();
                    if s < 1e-12 {
                        2.0 * l * tb.eval(0.0)
                    } else {
                        2.0 * l * tb.integral_to(s) / s
                    }
                }),
                Vec::new(),
            )
        }
        None => {
            let tb = table.clone();
            let terms = product_terms(&e, Arc::new(move |t| tb.eval(t) / (2.0 * PI)));
            let t2 = terms.clone();
            (Arc::new(move |x: &Vec3| t2.iter().map(|t| t.eval(x)).sum()), terms)
        }
    };
    Ok(assemble(format!("gamma-q({q})"), h, h_hat, spatial, e.constant.is_some(), q <= 2.0, terms))
}

/// `∫_0^∞ e^{−r^q} sin(rs)/r dr` by adaptive quadrature, an independent route
/// to `½∫_0^s γ_q`.
pub fn gamma_q_sine_integral(q: f64, s: f64) -> f64 {
    let r_max = 40.0_f64.powf(1.0 / q);
    let (v, _) = adaptive(0.0, r_max, 1e-13, |r| {
        if r == 0.0 {
            s
        } else {
            (-r.powf(q)).exp() * (r * s).sin() / r
        }
    });
    v
}
