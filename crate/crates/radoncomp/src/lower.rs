//! Turn checked expressions into the numerical objects of the core crate.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radoncomp_core::catalog::{self, CatalogEntry, CatalogParams};
use radoncomp_core::radial::{ClosedForms, Decay, RadialProfile, SeparableFunction, SeparableTerm};
use radoncomp_core::sphere::{SphereGrid, SphericalFunction};
use radoncomp_core::Vec3;

use crate::expr::{BinOp, CatalogName, Env, Expr, ExprError, Func};

/// Antipodal sample count and tolerance of the evenness check.
pub const EVEN_SAMPLES: usize = 64;
pub const EVEN_TOL: f64 = 1e-10;
const EVEN_SEED: u64 = 0x5eed_0e7e;

/// Reject angular expressions that differ at antipodal points. The sample
/// points come from a fixed seed, so the check is deterministic.
pub fn check_even(expr: &Expr) -> Result<(), ExprError> {
    let mut rng = ChaCha8Rng::seed_from_u64(EVEN_SEED);
    let none = |_: CatalogName, _: &[f64], _: &Vec3| f64::NAN;
    for _ in 0..EVEN_SAMPLES {
        let z: f64 = rng.gen_range(-1.0..1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let s = (1.0 - z * z).sqrt();
        let u = [s * phi.cos(), s * phi.sin(), z];
        let a = expr.eval(&Env::point(&u), &none);
        let b = expr.eval(&Env::point(&[-u[0], -u[1], -u[2]]), &none);
        if !(a.is_finite() && b.is_finite()) {
            return Err(ExprError::Domain(format!(
                "expression is not finite at ({:.6}, {:.6}, {:.6})",
                u[0], u[1], u[2]
            )));
        }
        if (a - b).abs() > EVEN_TOL * a.abs().max(1.0) {
            return Err(ExprError::Domain(format!(
                "expression is not even: f(u) = {a} but f(-u) = {b} at u = ({:.6}, {:.6}, {:.6})",
                u[0], u[1], u[2]
            )));
        }
    }
    Ok(())
}

/// Sample an angular expression on the grid.
pub fn sphere_function(expr: &Expr, grid: &Arc<SphereGrid>) -> Result<SphericalFunction, String> {
    let none = |_: CatalogName, _: &[f64], _: &Vec3| f64::NAN;
    let f = SphericalFunction::from_fn(grid, |u| expr.eval(&Env::point(u), &none));
    if let Some(i) = f.values.iter().position(|v| !v.is_finite()) {
        let u = grid.nodes()[i];
        return Err(format!(
            "expression is not finite at grid node {i} ({:.6}, {:.6}, {:.6})",
            u[0], u[1], u[2]
        ));
    }
    Ok(f)
}

/// Build a catalog entry from constant arguments, with isotropic `ℓ`
/// unless one is given.
pub fn catalog_entry(
    name: CatalogName,
    args: &[f64],
    grid: &Arc<SphereGrid>,
    ell: Option<&SphericalFunction>,
) -> radoncomp_core::Result<CatalogEntry> {
    let mut p = CatalogParams::isotropic(grid);
    if let Some(ell) = ell {
        p.ell = ell.clone();
    }
    match name {
        CatalogName::GaussR2 => p.alpha = args.first().copied().unwrap_or(1.0),
        CatalogName::ErfType => {
            p.alpha = args.first().copied().unwrap_or(1.0);
            p.beta = args.get(1).copied().unwrap_or(1.0);
        }
        CatalogName::GammaQ => p.q = args[0],
        CatalogName::ExpEll | CatalogName::CauchyEll => {}
    }
    catalog::by_name(name.name(), &p)
}

/// Resolution settings for spatial expressions.
#[derive(Debug, Clone)]
pub struct SpaceSettings {
    pub grid: Arc<SphereGrid>,
    /// Radius beyond which sampled profiles are treated as zero.
    pub extent: f64,
    pub decay: Decay,
    pub l_max: usize,
    pub n_shells: usize,
    pub n_radial: usize,
}

type CatalogKey = (CatalogName, Vec<u64>);

fn key(name: CatalogName, args: &[f64]) -> CatalogKey {
    (name, args.iter().map(|a| a.to_bits()).collect())
}

/// Build a spatial function. Sums, constant multiples and constant powers of
/// `gauss(w)`, `ball(R, σ)` and catalog entries keep their closed forms; other radial
/// expressions become a sampled radial profile; anything else is expanded
/// in spherical harmonics on radial shells.
pub fn space_function(expr: &Expr, s: &SpaceSettings) -> Result<SeparableFunction, String> {
    let mut entries: BTreeMap<CatalogKey, Arc<CatalogEntry>> = BTreeMap::new();
    for (name, args) in expr.catalog_calls() {
        let k = key(name, &args);
        if !entries.contains_key(&k) {
            let e = catalog_entry(name, &args, &s.grid, None).map_err(|e| format!("{}: {e}", name.name()))?;
            entries.insert(k, Arc::new(e));
        }
    }
    let label = expr.to_string();
    if let Some(mut f) = closed(expr, s, &entries)? {
        f.label = label;
        // slowly decaying closed forms are integrated out to the configured extent
        if matches!(f.decay, Decay::Algebraic { .. }) {
            f.extent = f.extent.max(s.extent);
        }
        return Ok(f);
    }
    let entries = Arc::new(entries);
    let e = Arc::new(expr.clone());
    let eval = {
        let (e, entries) = (e.clone(), entries.clone());
        move |env: &Env| {
            e.eval(env, &|name, args, x| {
                entries.get(&key(name, args)).map_or(f64::NAN, |c| c.f.eval(x))
            })
        }
    };
    if expr.is_radial() {
        let u = eval.clone();
        let profile = RadialProfile::from_fn(Arc::new(move |r| u(&Env::radius(r))), s.extent, s.n_radial, s.decay);
        if let Some(i) = profile.samples.iter().position(|v| !v.is_finite()) {
            return Err(format!("'{label}' is not finite at r = {}", i as f64 * profile.dr()));
        }
        if !profile.captures_support() {
            return Err(format!(
                "'{label}' has not decayed at the extent {} (|u(extent)| = {:e}); raise grid.extent or declare grid.decay = algebraic:<order>",
                s.extent,
                profile.samples.last().copied().unwrap_or(0.0).abs()
            ));
        }
        let mut f = SeparableFunction::from_terms(&label, vec![SeparableTerm::radial(profile, &s.grid)]);
        f.decay = s.decay;
        return Ok(f);
    }
    let spatial = Arc::new(move |x: &Vec3| eval(&Env::point(x)));
    let closed = ClosedForms {
        spatial: Some(spatial),
        ..ClosedForms::default()
    };
    let f = SeparableFunction::closed(&label, closed, false, s.extent, s.decay);
    f.expand(&s.grid, s.l_max, s.n_shells).map_err(|e| format!("'{label}': {e}"))
}

fn closed(
    expr: &Expr,
    s: &SpaceSettings,
    entries: &BTreeMap<CatalogKey, Arc<CatalogEntry>>,
) -> Result<Option<SeparableFunction>, String> {
    let c = |e: &Expr| e.constant_value();
    let scaled = |e: &Expr, k: f64| -> Result<Option<SeparableFunction>, String> {
        Ok(closed(e, s, entries)?.map(|f| f.scaled(k)))
    };
    match expr {
        Expr::Call(Func::Gauss, args) => {
            let w = c(&args[0]).unwrap_or(f64::NAN);
            catalog::gaussian(1.0 / (w * w), &s.grid).map(Some).map_err(|e| format!("gauss({w}): {e}"))
        }
        Expr::Call(Func::Ball, args) => {
            let (r, sigma) = (c(&args[0]).unwrap_or(f64::NAN), c(&args[1]).unwrap_or(f64::NAN));
            catalog::mollified_ball(r, sigma, &s.grid)
                .map(Some)
                .map_err(|e| format!("ball({r}, {sigma}): {e}"))
        }
        Expr::Call(Func::Catalog(name), args) => {
            let vals: Vec<f64> = args.iter().map(|a| c(a).unwrap_or(f64::NAN)).collect();
            Ok(entries.get(&key(*name, &vals)).map(|e| e.f.clone()))
        }
        Expr::Neg(a) => scaled(a, -1.0),
        Expr::Bin(BinOp::Mul, a, b) => match (c(a), c(b)) {
            (Some(k), None) => scaled(b, k),
            (None, Some(k)) => scaled(a, k),
            _ => Ok(None),
        },
        Expr::Bin(BinOp::Pow, a, b) => match c(b) {
            Some(k) if c(a).is_none() => Ok(closed(a, s, entries)?.map(|f| f.pow(k))),
            _ => Ok(None),
        },
        Expr::Bin(BinOp::Div, a, b) => match c(b) {
            Some(k) if c(a).is_none() => scaled(a, 1.0 / k),
            _ => Ok(None),
        },
        Expr::Bin(op @ (BinOp::Add | BinOp::Sub), a, b) => {
            let (Some(fa), Some(fb)) = (closed(a, s, entries)?, closed(b, s, entries)?) else {
                return Ok(None);
            };
            let sign = if *op == BinOp::Add { 1.0 } else { -1.0 };
            Ok(Some(fa.linear_combination(1.0, &fb, sign)))
        }
        _ => Ok(None),
    }
}
