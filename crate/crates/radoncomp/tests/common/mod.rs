#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use radoncomp::ScenarioConfig;

pub fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

/// Shipped configs in name order.
pub fn shipped_configs() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(configs_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "ini"))
        .collect();
    v.sort();
    v
}

/// Expected exit code of a shipped config.
pub fn expected_exit(path: &Path) -> i32 {
    match path.file_stem().unwrap().to_str().unwrap() {
        "certify-intersection" | "rn-compare-indicator" => 2,
        "spherical-compare-domination-fails" => 3,
        _ => 0,
    }
}

pub fn subcommand(path: &Path) -> String {
    ScenarioConfig::load(path).unwrap().0.kind.name().to_string()
}

pub struct Run {
    pub code: i32,
    pub stderr: String,
    pub stdout: String,
}

pub fn radoncomp(args: &[&str], envs: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_radoncomp"));
    cmd.args(args).env_remove("RADONCOMP_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
    }
}

/// Run a config into `out`.
pub fn run_config(config: &Path, out: &Path, extra: &[&str]) -> Run {
    let sub = subcommand(config);
    let mut args = vec![sub.as_str(), "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    radoncomp(&args, &[])
}

pub fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn schema_validator() -> jsonschema::Validator {
    let schema: serde_json::Value = serde_json::from_str(radoncomp::report::REPORT_SCHEMA).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

/// Schema violations of a report, one message each.
pub fn schema_errors(v: &jsonschema::Validator, report: &serde_json::Value) -> Vec<String> {
    v.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path)).collect()
}

/// Report text without the timing block.
pub fn report_without_timing(path: &Path) -> String {
    let mut v = read_json(path);
    v.as_object_mut().unwrap().remove("timing");
    serde_json::to_string_pretty(&v).unwrap()
}
