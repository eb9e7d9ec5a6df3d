use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn isobeam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isobeam"))
        .args(args)
        .env_remove("ISOBEAM_LOG")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "invalid JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn lie_profile_for_constant_gauge() {
    let out = isobeam(&["family", "lie", "--a", "1", "--k", "1", "--C", "2", "--interval", "0", "0.4"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    let mut keys: Vec<&str> = report.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["command", "config", "residuals", "results", "status"]);
    assert_eq!(report["status"], "pass");
    let profile = &report["results"]["profile"];
    let z = floats(&profile["z"]);
    let r = floats(&profile["r"]);
    for (z, r) in z.iter().zip(&r) {
        assert!((r - 1.0 / (2.0 - z)).abs() <= 1e-12);
    }
    assert!(floats(&profile["A"]).iter().all(|a| a.abs() <= 1e-12));
    assert!(floats(&profile["B"]).iter().all(|b| b.abs() <= 1e-12));
    assert!(report["residuals"]["principal_max"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn vanishing_gauge_is_an_input_error() {
    let out = isobeam(&["family", "lie", "--a", "z", "--k", "1", "--C", "2", "--interval", "0", "1"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["status"], "error");
    let bracket = floats(&report["results"]["error"]["bracket"]);
    assert_eq!(bracket, [0.0, 0.0]);
}

#[test]
fn chazy_pole_is_bracketed() {
    let out = isobeam(&["family", "chazy", "--k", "0", "1", "1", "0", "--interval", "0", "1"]);
    assert_eq!(code(&out), 1);
    let bracket = floats(&json(&out)["results"]["error"]["bracket"]);
    let pole = (4.0f64 / 27.0).cbrt();
    assert!(bracket[0] <= pole && pole <= bracket[1], "{bracket:?}");
}

#[test]
fn chazy_profile_as_csv() {
    let out = isobeam(&[
        "family", "chazy", "--k", "0", "1", "1", "0", "--interval", "0.6", "1.6", "--samples", "5",
        "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "z,r,s,A,B,A_hat,B_hat,principal_residual");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        for cell in row.split(',') {
            let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{cell}");
            let _: f64 = cell.parse().unwrap();
        }
    }
}

#[test]
fn exact_fractions_for_k() {
    let out = isobeam(&["family", "lie", "--a", "exp(z)", "--k", "2/6", "--C", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["results"]["family"]["k"], "1/3");
    let out = isobeam(&["family", "lie", "--a", "exp(z)", "--k", "1/2", "--C", "3"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn verify_suites() {
    let out = isobeam(&["verify", "--suite", "brackets"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["status"], "pass");
    for check in report["results"]["checks"].as_array().unwrap() {
        assert!(check["max_residual"].as_f64().unwrap() <= 1e-10);
    }

    let out = isobeam(&[
        "verify", "--suite", "principal", "--family", "lie", "--a", "exp(z)", "--k", "1/3", "--C", "3",
    ]);
    assert_eq!(code(&out), 0);

    let out = isobeam(&["verify", "--suite", "symmetry", "--case", "I"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["results"]["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn all_suites_pass_by_default() {
    let out = isobeam(&["verify"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let suites = json(&out)["results"]["suites"].as_array().unwrap().len();
    assert_eq!(suites, 6);
}

#[test]
fn failed_tolerance_still_writes_the_report() {
    let out = isobeam(&["verify", "--suite", "factorization", "--tol", "1e-30"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["status"], "fail");
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(code(&isobeam(&["verify", "--suite", "nonsense"])), 1);
    assert_eq!(code(&isobeam(&["family", "lie", "--k", "1"])), 1);
    assert_eq!(code(&isobeam(&["family", "lie", "--a", "1", "--k", "1", "--interval", "1", "0"])), 1);
    assert_eq!(code(&isobeam(&["spectrum", "--bc", "hinged"])), 1);
    assert_eq!(code(&isobeam(&["spectrum", "--unit", "--bc", "pinned"])), 1);
    assert_eq!(code(&isobeam(&["--help"])), 0);
}

#[test]
fn unit_spectra() {
    let out = isobeam(&["spectrum", "--unit", "--bc", "hinged", "--modes", "3"]);
    assert_eq!(code(&out), 0);
    let spec = &json(&out)["results"]["spectrum"];
    let values = floats(&spec["eigenvalues"]);
    for (k, v) in values.iter().enumerate() {
        let exact = ((k + 1) as f64 * PI).powi(4);
        assert!((v / exact - 1.0).abs() <= 1e-3, "{v} vs {exact}");
    }
    assert_eq!(spec["converged"], serde_json::json!([true, true, true]));

    let out = isobeam(&["spectrum", "--unit", "--bc", "clamped", "--modes", "1"]);
    let v = floats(&json(&out)["results"]["spectrum"]["eigenvalues"])[0];
    assert!((v / 500.5639 - 1.0).abs() <= 2e-3);

    let out = isobeam(&["spectrum", "--unit", "--length", "2", "--modes", "1"]);
    let v = floats(&json(&out)["results"]["spectrum"]["eigenvalues"])[0];
    assert!((v / (PI / 2.0).powi(4) - 1.0).abs() <= 1e-3);
}

#[test]
fn isospec_report_for_chazy_family() {
    let out = isobeam(&[
        "isospec", "--family", "chazy", "--k", "0", "1", "1", "0", "--interval", "0.6", "1.6", "--bc",
        "hinged", "--modes", "3", "--grid", "200",
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["results"]["modes"].as_array().unwrap().len(), 3);
    assert!(report["residuals"]["intertwining"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    let output = dir.path().join("profile.csv");
    std::fs::write(
        &config,
        r#"{"a": "1 + z^2/4", "k": ["1/4"], "C": 3, "samples": 4, "output_format": "csv"}"#,
    )
    .unwrap();
    let out = isobeam(&[
        "family", "lie", "--config", config.to_str().unwrap(), "--output", output.to_str().unwrap(),
        "--samples", "6",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&output).unwrap();
    // header plus the six samples requested on the command line
    assert_eq!(text.lines().count(), 7);

    std::fs::write(&config, r#"{"unknown_option": 1}"#).unwrap();
    let out = isobeam(&["verify", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn log_level_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_isobeam"))
        .args(["verify", "--suite", "hypergeometric"])
        .env("ISOBEAM_LOG", "info")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypergeometric/"));
}
