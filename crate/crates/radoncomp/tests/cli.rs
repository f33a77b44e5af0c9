mod common;

use std::path::Path;

use common::*;

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn emit_schema_prints_the_shipped_schema() {
    let r = radoncomp(&["--emit-schema"], &[]);
    assert_eq!(r.code, 0);
    let shipped = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json")).unwrap();
    assert_eq!(r.stdout.trim_end(), shipped.trim_end());
    let _: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(radoncomp(&[], &[]).code, 1);
    assert_eq!(radoncomp(&["frobnicate"], &[]).code, 1);
    assert_eq!(radoncomp(&["slicing"], &[]).code, 1);
    assert_eq!(radoncomp(&["--help"], &[]).code, 0);
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("missing.ini");
    let r = radoncomp(&["slicing", "--config", missing.to_str().unwrap()], &[]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("cannot read"), "{}", r.stderr);
}

#[test]
fn input_errors_exit_1() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cases = [
        ("bad-expr.ini", "[scenario]\nkind = slicing\np = 2\n[functions]\nf = 1 + (\n", "column 5"),
        ("unknown-key.ini", "[scenario]\nkind = slicing\np = 2\nspeed = 1\n[functions]\nf = 1\n", "speed"),
        ("odd.ini", "[scenario]\nkind = slicing\np = 2\n[functions]\nf = 1 + z\n", "not even"),
        (
            "degree.ini",
            "[scenario]\nkind = slicing\np = 2\n[grid]\nn_polar = 8\nn_azimuth = 16\nl_max = 20\n[functions]\nf = 1\n",
            "bandwidth",
        ),
    ];
    for (name, text, needle) in cases {
        let cfg = write_config(tmp.path(), name, text);
        let r = radoncomp(&["slicing", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()], &[]);
        assert_eq!(r.code, 1, "{name}: {}", r.stderr);
        assert!(r.stderr.contains(needle), "{name}: {}", r.stderr);
    }
    // the subcommand must match the config
    let cfg = write_config(tmp.path(), "kind.ini", "[scenario]\nkind = slicing\np = 2\n[functions]\nf = 1\n");
    let r = radoncomp(&["certify-pd", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()], &[]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    let slicing = configs_dir().join("slicing.ini");
    assert_eq!(run_config(&slicing, &out, &["--tol-scale", "-1"]).code, 1);
    assert_eq!(run_config(&slicing, &out, &["--threads", "0"]).code, 1);
    assert!(!out.join("report.json").exists());
}

#[test]
fn documented_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let v = schema_validator();
    let cases = [
        (
            "not-applicable.ini",
            "[scenario]\nkind = spherical-counterexample\np = 2\n[functions]\ng = 1 + 0.3*legendre(2, z)\n",
            2,
            "hypothesis-failed",
        ),
        ("domination.ini", "[scenario]\nkind = spherical-compare\np = 2\n[functions]\nf = 2\ng = 1\n", 3, "domination-failed"),
        (
            "construction.ini",
            "[scenario]\nkind = spherical-counterexample\np = 2\n[tolerances]\nmin_norm_gap = 1e6\n\
             [functions]\ng = 1 + 0.8*legendre(2, z)\n",
            4,
            "construction-failed",
        ),
        (
            "relation.ini",
            "[scenario]\nkind = catalog-verify\ncatalog = gauss-r2\n[grid]\nn_polar = 8\nn_azimuth = 16\n\
             [tolerances]\nrelation_tol = 0\n",
            5,
            "inconsistent",
        ),
    ];
    for (name, text, code, status) in cases {
        let cfg = write_config(tmp.path(), name, text);
        let out = tmp.path().join(format!("{name}.out"));
        let r = run_config(&cfg, &out, &[]);
        assert_eq!(r.code, code, "{name}: {}", r.stderr);
        let report = read_json(&out.join("report.json"));
        assert_eq!(report["scenario"]["status"], status);
        assert_eq!(report["scenario"]["exit_code"], code);
        assert_eq!(schema_errors(&v, &report), Vec::<String>::new(), "{name}");
        assert_eq!(read_json(&out.join("manifest.json"))["exit_code"], code);
    }
}

#[test]
fn sinogram_has_one_row_per_direction() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let r = run_config(&configs_dir().join("rn-compare.ini"), &out, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let mut rd = csv::Reader::from_path(out.join("sinogram_phi.csv")).unwrap();
    let header = rd.headers().unwrap().clone();
    assert_eq!(&header.iter().take(4).collect::<Vec<_>>(), &["theta_x", "theta_y", "theta_z", "weight"]);
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    // the upper hemisphere of an 8 x 16 direction grid, weights doubled
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r.len() == header.len()));
    let weights: f64 = rows.iter().map(|r| r[3].parse::<f64>().unwrap()).sum();
    assert!((weights - 4.0 * std::f64::consts::PI).abs() < 1e-12);
    let manifest = read_json(&out.join("manifest.json"));
    let files: Vec<&str> = manifest["files"].as_array().unwrap().iter().map(|f| f.as_str().unwrap()).collect();
    for f in ["report.json", "sinogram_phi.csv", "sinogram_psi.csv", "manifest.json"] {
        assert!(files.contains(&f), "{files:?}");
        assert!(out.join(f).exists());
    }
}

#[test]
fn threads_and_tolerance_scale_are_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("spherical-compare.ini");
    let sub = subcommand(&cfg);
    let out = tmp.path().join("env");
    let r = radoncomp(
        &[&sub, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--tol-scale", "10"],
        &[("RADONCOMP_THREADS", "2")],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let m = read_json(&out.join("manifest.json"));
    assert_eq!(m["threads"], 2);
    assert_eq!(m["tol_scale"], 10.0);
    assert_eq!(m["subcommand"], "spherical-compare");
    assert_eq!(m["config"], std::fs::read_to_string(&cfg).unwrap());
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["inputs"]["tolerances"]["norm_tol"], 1e-9 * 10.0);
    assert_eq!(report["inputs"]["tolerances"]["min_norm_gap"], 1e-8);
    // the flag wins over the environment
    let out = tmp.path().join("flag");
    let r = radoncomp(
        &[&sub, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", "1"],
        &[("RADONCOMP_THREADS", "3")],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(read_json(&out.join("manifest.json"))["threads"], 1);
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("spherical-counterexample.ini");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(run_config(&cfg, &a, &[]).code, 0);
    assert_eq!(run_config(&cfg, &b, &["--threads", "1"]).code, 0);
    assert_eq!(report_without_timing(&a.join("report.json")), report_without_timing(&b.join("report.json")));
    for f in std::fs::read_dir(&a).unwrap() {
        let name = f.unwrap().file_name();
        if name.to_str().unwrap().ends_with(".csv") {
            assert_eq!(std::fs::read(a.join(&name)).unwrap(), std::fs::read(b.join(&name)).unwrap(), "{name:?}");
        }
    }
}
