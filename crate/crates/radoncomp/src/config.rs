//! INI scenario files.
//!
//! ```ini
//! [scenario]
//! kind = spherical-counterexample
//! p = 2
//!
//! [grid]
//! n_polar = 48
//! n_azimuth = 96
//! l_max = 32
//!
//! [functions]
//! g = 1 + 0.8*legendre(2, z)
//! ```
//!
//! Every expression is parsed and checked against its domain when the file is
//! loaded, before any computation starts.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ini::Ini;
use radoncomp_core::radial::Decay;
use serde::Serialize;

use crate::expr::{parse_expr, CatalogName, Domain, Expr, ExprError};
use crate::lower::check_even;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    SphericalCompare,
    SphericalCounterexample,
    Slicing,
    RnCompare,
    RnCounterexample,
    CertifyPd,
    CertifyIntersection,
    IntersectionBody,
    CatalogVerify,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::SphericalCompare,
        Kind::SphericalCounterexample,
        Kind::Slicing,
        Kind::RnCompare,
        Kind::RnCounterexample,
        Kind::CertifyPd,
        Kind::CertifyIntersection,
        Kind::IntersectionBody,
        Kind::CatalogVerify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::SphericalCompare => "spherical-compare",
            Kind::SphericalCounterexample => "spherical-counterexample",
            Kind::Slicing => "slicing",
            Kind::RnCompare => "rn-compare",
            Kind::RnCounterexample => "rn-counterexample",
            Kind::CertifyPd => "certify-pd",
            Kind::CertifyIntersection => "certify-intersection",
            Kind::IntersectionBody => "intersection-body",
            Kind::CatalogVerify => "catalog-verify",
        }
    }

    /// Function keys accepted by the kind: `(key, domain, required)`.
    fn function_keys(self) -> &'static [(&'static str, Domain, bool)] {
        use Domain::{Space, Sphere};
        match self {
            Kind::SphericalCompare => &[("f", Sphere, true), ("g", Sphere, true)],
            Kind::SphericalCounterexample => &[("input", Sphere, false), ("f", Sphere, false), ("g", Sphere, false)],
            Kind::Slicing => &[("f", Sphere, true)],
            Kind::RnCompare => &[("phi", Space, true), ("psi", Space, true)],
            Kind::RnCounterexample => &[("input", Space, false), ("phi", Space, false), ("psi", Space, false)],
            Kind::CertifyPd => &[("f", Sphere, true)],
            Kind::CertifyIntersection => &[("f", Space, true)],
            Kind::IntersectionBody => &[("rho", Sphere, true), ("density", Space, false)],
            Kind::CatalogVerify => &[("ell", Sphere, false)],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown scenario kind '{s}'"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Format(String),
    #[error("[{section}] {key}: {message}")]
    Value {
        section: String,
        key: String,
        message: String,
    },
    #[error("[functions] {key}: {source}")]
    Expr { key: String, source: ExprError },
}

fn value_err(section: &str, key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Value {
        section: section.into(),
        key: key.into(),
        message: message.into(),
    }
}

/// Grid and resolution parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub n_polar: usize,
    pub n_azimuth: usize,
    pub l_max: usize,
    /// Half-width of the offset grid of sinograms and 1D transforms.
    pub t_max: f64,
    pub n_t: usize,
    pub r_cap: f64,
    /// Radius at which sampled spatial expressions are cut off.
    pub extent: f64,
    #[serde(serialize_with = "ser_decay")]
    pub decay: Decay,
    pub n_shells: usize,
    pub n_radial: usize,
}

fn ser_decay<S: serde::Serializer>(d: &Decay, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&decay_name(d))
}

pub fn decay_name(d: &Decay) -> String {
    match d {
        Decay::Schwartz => "schwartz".into(),
        Decay::Algebraic { order } => format!("algebraic:{order}"),
    }
}

impl GridSpec {
    /// Defaults for the spherical kinds.
    pub fn spherical() -> Self {
        GridSpec {
            n_polar: 64,
            n_azimuth: 128,
            l_max: 32,
            ..Self::rn()
        }
    }

    /// Defaults for the R³ kinds: the direction grid is small because every
    /// direction carries a full 1D transform.
    pub fn rn() -> Self {
        GridSpec {
            n_polar: 16,
            n_azimuth: 32,
            l_max: 12,
            t_max: 16.0,
            n_t: 2048,
            r_cap: 1024.0,
            extent: 16.0,
            decay: Decay::Schwartz,
            n_shells: 513,
            n_radial: 4097,
        }
    }
}

/// Tolerance overrides; `--tol-scale` multiplies all of them except
/// `min_norm_gap`, which is a threshold rather than a slack.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub pd_rel_tol: f64,
    pub domination_rel_tol: f64,
    pub norm_tol: f64,
    pub min_norm_gap: f64,
    pub tail_tol: f64,
    /// Catalog verification: allowed relation residual.
    pub relation_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pd_rel_tol: 1e-9,
            domination_rel_tol: 1e-9,
            norm_tol: 1e-9,
            min_norm_gap: 1e-8,
            tail_tol: 1e-6,
            relation_tol: 1e-3,
        }
    }
}

impl Tolerances {
    pub fn scaled(&self, k: f64) -> Self {
        Tolerances {
            pd_rel_tol: self.pd_rel_tol * k,
            domination_rel_tol: self.domination_rel_tol * k,
            norm_tol: self.norm_tol * k,
            min_norm_gap: self.min_norm_gap,
            tail_tol: self.tail_tol * k,
            relation_tol: self.relation_tol * k,
        }
    }
}

/// Catalog selection for `catalog-verify`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogSpec {
    #[serde(serialize_with = "ser_catalog")]
    pub name: CatalogName,
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
}

fn ser_catalog<S: serde::Serializer>(c: &CatalogName, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(c.name())
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub kind: Kind,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub dual: Option<bool>,
    pub catalog: Option<CatalogSpec>,
    pub output: Option<PathBuf>,
    pub grid: GridSpec,
    /// Parsed expressions with their source text.
    pub functions: BTreeMap<String, (Expr, String)>,
    pub tolerances: Tolerances,
}

const SCENARIO_KEYS: [&str; 9] = ["kind", "p", "q", "dual", "output", "catalog", "alpha", "beta", "gamma_q"];
const GRID_KEYS: [&str; 10] = [
    "n_polar", "n_azimuth", "l_max", "t_max", "n_t", "r_cap", "extent", "decay", "n_shells", "n_radial",
];
const TOL_KEYS: [&str; 6] = ["pd_rel_tol", "domination_rel_tol", "norm_tol", "min_norm_gap", "tail_tol", "relation_tol"];

fn parse_num<T: FromStr>(section: &str, key: &str, v: &str) -> Result<T, ConfigError> {
    v.trim()
        .parse()
        .map_err(|_| value_err(section, key, format!("cannot parse '{v}'")))
}

fn parse_decay(v: &str) -> Result<Decay, ConfigError> {
    let v = v.trim();
    if v == "schwartz" {
        return Ok(Decay::Schwartz);
    }
    if let Some(order) = v.strip_prefix("algebraic:") {
        let order: f64 = parse_num("grid", "decay", order)?;
        if order > 0.0 {
            return Ok(Decay::Algebraic { order });
        }
    }
    Err(value_err("grid", "decay", format!("expected 'schwartz' or 'algebraic:<order>', got '{v}'")))
}

impl ScenarioConfig {
    pub fn load(path: &std::path::Path) -> Result<(Self, String), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok((Self::parse(&text, None)?, text))
    }

    /// Parse a config. `kind` supplies the scenario kind when the file has
    /// none, and must agree with it otherwise.
    pub fn parse(text: &str, kind: Option<Kind>) -> Result<Self, ConfigError> {
        let ini = Ini::load_from_str(text).map_err(|e| ConfigError::Format(e.to_string()))?;
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        for (sec, props) in ini.iter() {
            let name = sec.unwrap_or("").to_string();
            if !["scenario", "grid", "functions", "tolerances"].contains(&name.as_str()) {
                if name.is_empty() && props.is_empty() {
                    continue;
                }
                return Err(ConfigError::Format(format!("unknown section [{name}]")));
            }
            let entry = sections.entry(name).or_default();
            for (k, v) in props.iter() {
                entry.insert(k.to_string(), v.to_string());
            }
        }
        let empty = BTreeMap::new();
        let scenario = sections.get("scenario").unwrap_or(&empty);
        let grid_sec = sections.get("grid").unwrap_or(&empty);
        let funcs = sections.get("functions").unwrap_or(&empty);
        let tols = sections.get("tolerances").unwrap_or(&empty);
        for (sec, map, allowed) in [
            ("scenario", scenario, &SCENARIO_KEYS[..]),
            ("grid", grid_sec, &GRID_KEYS[..]),
            ("tolerances", tols, &TOL_KEYS[..]),
        ] {
            if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
                return Err(value_err(sec, k, "unknown key"));
            }
        }

        let file_kind = scenario
            .get("kind")
            .map(|s| s.trim().parse::<Kind>().map_err(|m| value_err("scenario", "kind", m)))
            .transpose()?;
        let kind = match (file_kind, kind) {
            (Some(a), Some(b)) if a != b => {
                return Err(value_err(
                    "scenario",
                    "kind",
                    format!("config is for '{a}' but the subcommand is '{b}'"),
                ))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(value_err("scenario", "kind", "missing")),
        };

        let num = |key: &str| -> Result<Option<f64>, ConfigError> {
            scenario.get(key).map(|v| parse_num::<f64>("scenario", key, v)).transpose()
        };
        let p = num("p")?;
        let q = num("q")?;
        let dual = scenario
            .get("dual")
            .map(|v| parse_num::<bool>("scenario", "dual", v))
            .transpose()?;
        let output = scenario.get("output").map(|s| PathBuf::from(s.trim()));
        if let Some(p) = p {
            if !(p > 0.0 && p.is_finite()) {
                return Err(value_err("scenario", "p", "must be positive"));
            }
        }

        let mut grid = match kind {
            Kind::SphericalCompare
            | Kind::SphericalCounterexample
            | Kind::Slicing
            | Kind::CertifyPd
            | Kind::IntersectionBody => GridSpec::spherical(),
            _ => GridSpec::rn(),
        };
        for (k, v) in grid_sec {
            match k.as_str() {
                "n_polar" => grid.n_polar = parse_num("grid", k, v)?,
                "n_azimuth" => grid.n_azimuth = parse_num("grid", k, v)?,
                "l_max" => grid.l_max = parse_num("grid", k, v)?,
                "t_max" => grid.t_max = parse_num("grid", k, v)?,
                "n_t" => grid.n_t = parse_num("grid", k, v)?,
                "r_cap" => grid.r_cap = parse_num("grid", k, v)?,
                "extent" => grid.extent = parse_num("grid", k, v)?,
                "decay" => grid.decay = parse_decay(v)?,
                "n_shells" => grid.n_shells = parse_num("grid", k, v)?,
                "n_radial" => grid.n_radial = parse_num("grid", k, v)?,
                _ => unreachable!("keys were validated"),
            }
        }
        if !grid_sec.contains_key("l_max") {
            // an unset degree follows the grid
            let bandwidth = grid.n_polar.saturating_sub(1).min(grid.n_azimuth.saturating_sub(1) / 2);
            grid.l_max = grid.l_max.min(bandwidth);
        }
        if grid.n_t < 4 || grid.n_shells < 2 || grid.n_radial < 2 {
            return Err(value_err("grid", "n_t", "n_t must be at least 4 and n_shells, n_radial at least 2"));
        }
        if !(grid.t_max > 0.0 && grid.extent > 0.0 && grid.r_cap > 0.0) {
            return Err(value_err("grid", "t_max", "t_max, extent and r_cap must be positive"));
        }

        let mut tolerances = Tolerances::default();
        for (k, v) in tols {
            let x: f64 = parse_num("tolerances", k, v)?;
            if !(x >= 0.0 && x.is_finite()) {
                return Err(value_err("tolerances", k, "must be a non-negative number"));
            }
            match k.as_str() {
                "pd_rel_tol" => tolerances.pd_rel_tol = x,
                "domination_rel_tol" => tolerances.domination_rel_tol = x,
                "norm_tol" => tolerances.norm_tol = x,
                "min_norm_gap" => tolerances.min_norm_gap = x,
                "tail_tol" => tolerances.tail_tol = x,
                "relation_tol" => tolerances.relation_tol = x,
                _ => unreachable!("keys were validated"),
            }
        }

        let allowed = kind.function_keys();
        let mut functions = BTreeMap::new();
        for (k, src) in funcs {
            let Some(&(_, domain, _)) = allowed.iter().find(|(name, _, _)| name == k) else {
                return Err(value_err("functions", k, format!("not used by '{kind}'")));
            };
            let expr = parse_expr(src).map_err(|source| ConfigError::Expr { key: k.clone(), source })?;
            expr.check(domain).map_err(|source| ConfigError::Expr { key: k.clone(), source })?;
            if domain == Domain::Sphere {
                check_even(&expr).map_err(|source| ConfigError::Expr { key: k.clone(), source })?;
            }
            functions.insert(k.clone(), (expr, src.trim().to_string()));
        }
        for (k, _, required) in allowed {
            if *required && !functions.contains_key(*k) {
                return Err(value_err("functions", k, "missing"));
            }
        }

        let needs_p = !matches!(
            kind,
            Kind::CertifyPd | Kind::CertifyIntersection | Kind::IntersectionBody | Kind::CatalogVerify
        );
        if needs_p && p.is_none() {
            return Err(value_err("scenario", "p", "missing"));
        }
        match kind {
            Kind::SphericalCounterexample | Kind::RnCounterexample => {
                let keys: &[&str] = if kind == Kind::SphericalCounterexample {
                    &["input", "f", "g"]
                } else {
                    &["input", "phi", "psi"]
                };
                let given: Vec<&str> = keys.iter().copied().filter(|k| functions.contains_key(*k)).collect();
                if given.len() != 1 {
                    return Err(value_err(
                        "functions",
                        keys[0],
                        format!("give exactly one of {}", keys.join(", ")),
                    ));
                }
            }
            Kind::CertifyPd if q.is_none() && p.is_none() => {
                return Err(value_err("scenario", "q", "missing (or give p, with q = p - 1)"));
            }
            _ => {}
        }

        let catalog = if kind == Kind::CatalogVerify {
            let name = scenario
                .get("catalog")
                .ok_or_else(|| value_err("scenario", "catalog", "missing"))?;
            let name = CatalogName::from_name(name.trim()).ok_or_else(|| {
                value_err("scenario", "catalog", format!("unknown catalog entry '{}'", name.trim()))
            })?;
            Some(CatalogSpec {
                name,
                alpha: num("alpha")?.unwrap_or(1.0),
                beta: num("beta")?.unwrap_or(1.0),
                q: num("gamma_q")?.unwrap_or(1.0),
            })
        } else {
            None
        };

        Ok(ScenarioConfig {
            kind,
            p,
            q,
            dual,
            catalog,
            output,
            grid,
            functions,
            tolerances,
        })
    }

    pub fn expr(&self, key: &str) -> Option<&Expr> {
        self.functions.get(key).map(|(e, _)| e)
    }
}
