//! Argument handling and the run sequence of the `radoncomp` binary.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::config::{Kind, ScenarioConfig};
use crate::report::{write_json, Manifest, REPORT_SCHEMA};
use crate::run::{execute, write_outputs, EXIT_INPUT};

#[derive(Parser, Debug)]
#[command(name = "radoncomp", version, about = "Comparison problems for Radon transforms")]
struct Cli {
    /// Print the JSON schema of report.json and exit.
    #[arg(long)]
    emit_schema: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Scenario file (INI).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `scenario.output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Multiply every tolerance by this factor.
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
    /// Worker threads for the numerical kernels.
    #[arg(long, env = "RADONCOMP_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the spherical comparison theorem on a pair (f, g).
    SphericalCompare(RunArgs),
    /// Construct a counterexample to spherical comparison.
    SphericalCounterexample(RunArgs),
    /// Check the slicing inequality (or its dual).
    Slicing(RunArgs),
    /// Verify the classical comparison theorem on a pair (phi, psi).
    RnCompare(RunArgs),
    /// Construct a counterexample to the classical comparison.
    RnCounterexample(RunArgs),
    /// Certify positive definiteness of f^q r^-1.
    CertifyPd(RunArgs),
    /// Test whether a function on R^3 is an intersection function.
    CertifyIntersection(RunArgs),
    /// Compute the intersection body of a star body.
    IntersectionBody(RunArgs),
    /// Check a catalog example against its closed forms.
    CatalogVerify(RunArgs),
}

impl Command {
    fn split(&self) -> (Kind, &RunArgs) {
        match self {
            Command::SphericalCompare(a) => (Kind::SphericalCompare, a),
            Command::SphericalCounterexample(a) => (Kind::SphericalCounterexample, a),
            Command::Slicing(a) => (Kind::Slicing, a),
            Command::RnCompare(a) => (Kind::RnCompare, a),
            Command::RnCounterexample(a) => (Kind::RnCounterexample, a),
            Command::CertifyPd(a) => (Kind::CertifyPd, a),
            Command::CertifyIntersection(a) => (Kind::CertifyIntersection, a),
            Command::IntersectionBody(a) => (Kind::IntersectionBody, a),
            Command::CatalogVerify(a) => (Kind::CatalogVerify, a),
        }
    }
}

/// Run the binary on `args` and return its exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    if cli.emit_schema {
        print!("{REPORT_SCHEMA}");
        return 0;
    }
    let Some(cmd) = cli.command else {
        eprintln!("radoncomp: error: a subcommand is required (see --help)");
        return EXIT_INPUT;
    };
    match run(&cmd) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("radoncomp: error: {msg}");
            EXIT_INPUT
        }
    }
}

fn configure_threads(n: Option<usize>) -> Result<usize, String> {
    match n {
        Some(0) => Err("--threads must be at least 1".into()),
        #[cfg(feature = "parallel")]
        Some(n) => {
            // a second call in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(rayon::current_num_threads())
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(1),
        #[cfg(feature = "parallel")]
        None => Ok(rayon::current_num_threads()),
        #[cfg(not(feature = "parallel"))]
        None => Ok(1),
    }
}

fn run(cmd: &Command) -> Result<i32, String> {
    let start = Instant::now();
    let (kind, args) = cmd.split();
    let threads = configure_threads(args.threads)?;
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
    let cfg = ScenarioConfig::parse(&text, Some(kind)).map_err(|e| e.to_string())?;
    let dir = args
        .out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("radoncomp-out").join(kind.name()));
    let outcome = execute(&cfg, args.tol_scale).map_err(|e| e.to_string())?;
    let mut files = write_outputs(&outcome, &dir).map_err(|e| e.to_string())?;
    files.push("manifest.json".into());
    let code = outcome.status.exit_code();
    let manifest = Manifest {
        subcommand: kind.name().into(),
        config_path: args.config.display().to_string(),
        config: text,
        library: "radoncomp-core".into(),
        library_version: env!("CARGO_PKG_VERSION").into(),
        threads,
        tol_scale: args.tol_scale,
        files,
        exit_code: code,
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    write_json(&dir.join("manifest.json"), &manifest).map_err(|e| format!("cannot write manifest: {e}"))?;
    eprintln!(
        "radoncomp: {} {}: {} (report in {})",
        kind.name(),
        outcome.status.name(),
        outcome.report.scenario.message,
        dir.display()
    );
    Ok(code)
}
