//! End-to-end tests of the `fermi-charts` binary: exit codes, output
//! formats, determinism, and the documented error behavior.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fermi-charts"))
}

fn write_config(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

const DE_SITTER: &str = r#"{"spacetime": {"kind": "de_sitter", "lambda": 3.0}"#;

#[test]
fn transform_from_fermi_row() {
    let config = write_config(
        "transform_ds.json",
        &format!(
            r#"{DE_SITTER},
            "transform": {{"direction": "from-fermi",
                           "points": [[0.0, 1.0471975511965976, 0.0, 0.0]]}}}}"#
        ),
    );
    let out = run(&["transform", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let row = &v["rows"][0];
    assert!((row[5].as_f64().unwrap() - 0.8660254037844386).abs() < 1e-14);
    assert!(row[8].as_f64().unwrap() < 1e-14);
}

#[test]
fn transform_identity_for_einstein_static() {
    let config = write_config(
        "transform_es.json",
        r#"{"spacetime": {"kind": "einstein_static", "R": 1.0},
            "transform": {"direction": "to-fermi", "points": [[0.0, 0.0, 0.0, 0.0]]}}"#,
    );
    let out = run(&["transform", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let row = v["rows"][0].as_array().unwrap();
    for cell in row.iter().take(8) {
        assert_eq!(cell.as_f64().unwrap(), 0.0);
    }
}

#[test]
fn transform_outside_chart_exits_2() {
    let config = write_config(
        "transform_oob.json",
        &format!(
            r#"{DE_SITTER},
            "transform": {{"direction": "from-fermi", "points": [[0.0, 1.6, 0.0, 0.0]]}}}}"#
        ),
    );
    let out = run(&["transform", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("outside the Fermi chart"), "{stderr}");
    assert!(stderr.contains("1.6"), "{stderr}");
}

#[test]
fn metric_command_evaluates_fermi_polar() {
    let config = write_config(
        "metric_ads.json",
        r#"{"spacetime": {"kind": "anti_de_sitter", "lambda": -3.0},
            "metric": {"chart": "fermi_polar", "points": [[0.0, 1.0, 1.5707963267948966, 0.0]]}}"#,
    );
    let out = run(&["metric", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let columns: Vec<&str> = v["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    let g00_idx = columns.iter().position(|&c| c == "g_00").unwrap();
    let g00 = v["rows"][0][g00_idx].as_f64().unwrap();
    assert!((g00 + 1.0f64.cosh().powi(2)).abs() < 1e-14);
}

#[test]
fn curvature_table_is_constant_for_de_sitter() {
    let config = write_config(
        "curvature_ds.json",
        &format!(r#"{DE_SITTER}, "grid": {{"rho_min": 0.0, "rho_max": 1.5, "count": 16}}}}"#),
    );
    let out = run(&["curvature", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    for row in rows {
        assert_eq!(row[1].as_f64().unwrap(), 1.0);
        assert!(row[3].as_f64().unwrap() < 1e-6);
    }
}

#[test]
fn curvature_for_interior_schwarzschild_center() {
    let config = write_config(
        "curvature_is.json",
        r#"{"spacetime": {"kind": "interior_schwarzschild", "M": 0.25, "R": 1.0, "lambda": 0.0},
            "grid": {"rho_min": 0.0, "rho_max": 1.0, "count": 3}}"#,
    );
    let out = run(&["curvature", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let k0 = v["rows"][0][1].as_f64().unwrap();
    assert!((k0 - (-0.4459029062228061)).abs() < 1e-12);
}

#[test]
fn jacobi_table_hits_cosh() {
    let config = write_config(
        "jacobi_ads.json",
        r#"{"spacetime": {"kind": "anti_de_sitter", "lambda": -3.0},
            "jacobi": {"delta_t": 1.0, "rho_max": 2.0, "count": 3}}"#,
    );
    let out = run(&["jacobi", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    // Middle row sits at rho = 1: y = cosh(1).
    assert!((rows[1][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((rows[1][1].as_f64().unwrap() - 1.5430806348152437).abs() < 1e-9);

    let es_config = write_config(
        "jacobi_es.json",
        r#"{"spacetime": {"kind": "einstein_static", "R": 1.0},
            "jacobi": {"delta_t": 1.0, "rho_max": 2.0, "count": 5}}"#,
    );
    let out = run(&["jacobi", "--config", es_config.to_str().unwrap()]);
    let v = stdout_json(&out);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row[1].as_f64().unwrap(), 1.0);
    }
}

#[test]
fn horizon_values_per_spacetime() {
    let config = write_config("horizon_ds.json", &format!("{DE_SITTER}}}"));
    let out = run(&["horizon", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let rho_h = v["rows"][0][0].as_f64().unwrap();
    assert!((rho_h - std::f64::consts::FRAC_PI_2).abs() < 1e-9);

    for (name, spacetime) in [
        ("ads", r#"{"kind": "anti_de_sitter", "lambda": -3.0}"#),
        ("es", r#"{"kind": "einstein_static", "R": 1.0}"#),
    ] {
        let config = write_config(
            &format!("horizon_{name}.json"),
            &format!(r#"{{"spacetime": {spacetime}}}"#),
        );
        let out = run(&["horizon", "--config", config.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        let v = stdout_json(&out);
        assert!(v["rows"][0][0].is_null(), "{name}");
    }
}

#[test]
fn validate_de_sitter_passes_with_seed() {
    let config = write_config("validate_ds.json", &format!("{DE_SITTER}}}"));
    let out = run(&[
        "validate",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "42",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["all_passed"], serde_json::json!(true));
    assert_eq!(v["seed"], serde_json::json!(42));
    let checks = v["checks"].as_array().unwrap();
    let oracle = checks
        .iter()
        .find(|c| c["name"] == "exponential_map_oracle")
        .unwrap();
    assert!(oracle["max_error"].as_f64().unwrap() < 1e-7);
}

#[test]
fn validate_minkowski_passes() {
    let config = write_config(
        "validate_mink.json",
        r#"{"spacetime": {"kind": "minkowski"}}"#,
    );
    let out = run(&["validate", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn validate_output_is_deterministic() {
    let config = write_config("validate_det.json", &format!("{DE_SITTER}}}"));
    let args = [
        "validate",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn rejected_fluid_exits_2() {
    let config = write_config(
        "validate_reject.json",
        r#"{"spacetime": {"kind": "interior_schwarzschild", "M": 0.45, "R": 1.0, "lambda": 0.0}}"#,
    );
    let out = run(&["validate", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("A(r)"), "{stderr}");
}

#[test]
fn unknown_config_key_exits_2() {
    let config = write_config(
        "bad_key.json",
        r#"{"spacetime": {"kind": "de_sitter", "lambda": 3.0, "spin": 0.5}}"#,
    );
    let out = run(&["horizon", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_block_exits_2() {
    let config = write_config("no_transform_block.json", &format!("{DE_SITTER}}}"));
    let out = run(&["transform", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("transform"), "{stderr}");
}

#[test]
fn csv_and_json_encode_identical_numbers() {
    let config = write_config(
        "curvature_formats.json",
        &format!(r#"{DE_SITTER}, "grid": {{"rho_min": 0.0, "rho_max": 1.2, "count": 7}}}}"#),
    );
    let json_out = run(&["curvature", "--config", config.to_str().unwrap()]);
    let csv_out = run(&[
        "curvature",
        "--config",
        config.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(json_out.status.code(), Some(0));
    assert_eq!(csv_out.status.code(), Some(0));

    let v = stdout_json(&json_out);
    let csv = String::from_utf8(csv_out.stdout).unwrap();
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header, vec!["rho", "K_analytic", "K_fd", "abs_diff"]);
    for (row, line) in v["rows"].as_array().unwrap().iter().zip(lines) {
        for (cell, field) in row.as_array().unwrap().iter().zip(line.split(',')) {
            let from_json = cell.as_f64().unwrap();
            let from_csv: f64 = field.parse().unwrap();
            assert_eq!(from_json.to_bits(), from_csv.to_bits());
        }
    }
}

#[test]
fn out_flag_writes_file() {
    let config = write_config("horizon_out.json", &format!("{DE_SITTER}}}"));
    let out_path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("horizon_result.json");
    let out = run(&[
        "horizon",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let contents = fs::read_to_string(&out_path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&contents).unwrap();
    assert_eq!(v["command"], serde_json::json!("horizon"));
}

#[test]
fn missing_config_file_exits_2() {
    let out = run(&["validate", "--config", "/nonexistent/nope.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_error_exits_2() {
    let out = run(&["not-a-command"]);
    assert_eq!(out.status.code(), Some(2));
}
