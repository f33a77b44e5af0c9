//! `report.json`, CSV tables and the run manifest.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use radoncomp_core::homogeneous::{PDCertificate, Verdict, WitnessPoint};
use radoncomp_core::radon::{Sinogram, TGrid};
use radoncomp_core::sphere::SphericalFunction;
use serde::Serialize;
use serde_json::{json, Value};

/// JSON schema of `report.json`.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Serialize)]
pub struct Scenario {
    pub kind: String,
    pub status: String,
    pub exit_code: i32,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateRecord {
    pub label: String,
    pub verdict: String,
    pub inconclusive: bool,
    pub witness_point: Value,
    pub witness_value: f64,
    pub tolerance: f64,
}

impl CertificateRecord {
    pub fn from_pd(label: &str, c: &PDCertificate) -> Self {
        CertificateRecord {
            label: label.into(),
            verdict: verdict_name(c.verdict).into(),
            inconclusive: c.inconclusive,
            witness_point: witness_json(&c.witness_point),
            witness_value: c.witness_value,
            tolerance: c.tolerance,
        }
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::PositiveDefinite => "positive-definite",
        Verdict::NotPositiveDefinite => "not-positive-definite",
    }
}

pub fn witness_json(w: &WitnessPoint) -> Value {
    match w {
        WitnessPoint::Sphere { node, point } => json!({"kind": "sphere", "node": node, "point": point}),
        WitnessPoint::Frequency { t, direction } => json!({"kind": "frequency", "t": t, "direction": direction}),
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Norms {
    pub lp_f: Option<f64>,
    pub lp_g: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Margins {
    /// `min(Rg − Rf)`.
    pub domination: Option<f64>,
    /// `‖f‖_p − ‖g‖_p`.
    pub norm_gap: Option<f64>,
    /// Minimum of a constructed function.
    pub positivity: Option<f64>,
    /// Slack of the slicing inequality.
    pub slicing: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Residuals {
    pub parseval: Option<f64>,
    pub fourier_slice: Option<f64>,
    pub pairing: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

/// Everything but `timing` is a function of the config alone.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario: Scenario,
    pub inputs: Value,
    pub certificates: Vec<CertificateRecord>,
    pub norms: Norms,
    pub margins: Margins,
    pub residuals: Residuals,
    pub details: BTreeMap<String, Value>,
    pub timing: Timing,
}

/// A CSV file held in memory until the run finishes.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    /// Sphere function: `node, x, y, z, weight, value`.
    pub fn sphere(f: &SphericalFunction) -> Self {
        Self::sphere_values(f, &f.values)
    }

    /// Values on the grid of `f`.
    pub fn sphere_values(f: &SphericalFunction, values: &[f64]) -> Self {
        let g = &f.grid;
        let rows = (0..g.len())
            .map(|i| {
                let u = g.nodes()[i];
                vec![i as f64, u[0], u[1], u[2], g.weights()[i], values[i]]
            })
            .collect();
        Table {
            header: ["node", "x", "y", "z", "weight", "value"].map(String::from).to_vec(),
            rows,
        }
    }

    /// Sinogram: one row per direction; the header carries the offsets.
    pub fn sinogram(s: &Sinogram) -> Self {
        let mut header: Vec<String> = ["theta_x", "theta_y", "theta_z", "weight"].map(String::from).to_vec();
        header.extend(s.t.points().iter().map(|t| format!("{t}")));
        let rows = (0..s.n_directions())
            .map(|d| {
                let mut row = s.directions[d].to_vec();
                row.push(s.weights[d]);
                row.extend_from_slice(s.row(d));
                row
            })
            .collect();
        Table { header, rows }
    }

    /// 1D transform: `t, value`.
    pub fn transform(t: &TGrid, values: &[f64]) -> Self {
        Table {
            header: vec!["t".into(), "value".into()],
            rows: t.points().iter().zip(values).map(|(t, v)| vec![*t, *v]).collect(),
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v}")))?;
        }
        w.flush()
    }
}

/// `report.json` with a trailing newline.
pub fn write_json(path: &Path, value: &impl Serialize) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")
}

/// Run manifest: config echo, library version and wall time.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub subcommand: String,
    pub config_path: String,
    pub config: String,
    pub library: String,
    pub library_version: String,
    pub threads: usize,
    pub tol_scale: f64,
    pub files: Vec<String>,
    pub exit_code: i32,
    pub wall_seconds: f64,
}
