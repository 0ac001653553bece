//! End-to-end tests of the binary: argument handling, output schemas,
//! determinism, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn sfmerton(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfmerton"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn price_classical_black_scholes() {
    let out = sfmerton(&[
        "price", "--alpha", "1", "--hurst", "0.5", "--sigma-r", "0", "--mu-r", "0", "--rho", "0",
        "--r0", "0.05", "--s0", "100", "--strike", "100", "--maturity", "1", "--sigma-s", "0.2",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("10.4506"), "got:\n{text}");
    assert!(text.contains("variant        = Merton"));
    // t defaults to 0, so both closed forms are reported
    assert!(text.contains("t=0 closed forms"));
}

#[test]
fn price_json_schema() {
    let out = sfmerton(&[
        "price", "--alpha", "0.9", "--hurst", "0.6", "--sigma-r", "0.3", "--mu-r", "0.5", "--rho",
        "0.4", "--r0", "0.3", "--s0", "2", "--strike", "3", "--maturity", "0.3", "--sigma-s",
        "0.4", "--format", "json",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let obj = v.as_object().unwrap();
    for key in ["price", "d1", "d2", "bond_price", "total_variance", "variant"] {
        assert!(obj.contains_key(key), "missing key {key}");
    }
    assert_eq!(obj.len(), 6);
    assert_eq!(obj["variant"], "SubFracMerton");
}

#[test]
fn bond_deterministic_discounting() {
    let out = sfmerton(&[
        "bond", "--alpha", "0.9", "--hurst", "0.6", "--r0", "0.05", "--maturity", "2",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    // sigma_r and mu_r default to 0: price = exp(-0.1)
    assert!(stdout(&out).contains("0.904837"), "got:\n{}", stdout(&out));
}

#[test]
fn table_csv_shape() {
    let out = sfmerton(&[
        "table", "--alpha", "0.9", "--hurst", "0.6", "--sigma-r", "0.3", "--mu-r", "0.5", "--rho",
        "0.4", "--sigma-s", "0.4", "--strike", "3", "--r0", "0.3", "--format", "csv",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "S,T,variant,price");
    assert_eq!(lines.len(), 1 + 9 * 2 * 4);
    assert!(lines[1].starts_with("2.0000000000000000e0,2.0000000000000001e-1,Merton,"));
}

#[test]
fn paths_csv_is_deterministic_with_plateaus() {
    let dir = tempfile::tempdir().unwrap();
    let file_a = dir.path().join("a.csv");
    let file_b = dir.path().join("b.csv");
    for file in [&file_a, &file_b] {
        let out = sfmerton(&[
            "paths", "--alpha", "0.9", "--hurst", "0.8", "--sigma-s", "0.1", "--s0", "1", "--r0",
            "0.01", "--seed", "42", "--out", file.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", stderr(&out));
    }
    let a = std::fs::read(&file_a).unwrap();
    let b = std::fs::read(&file_b).unwrap();
    assert_eq!(a, b, "same argv + seed must be byte-identical");

    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "path_id,t,T_alpha,r,S");
    let mut t_alpha_prev = -1.0f64;
    let mut plateaus = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 5);
        let t_alpha: f64 = fields[2].parse().unwrap();
        assert!(t_alpha >= t_alpha_prev);
        if t_alpha == t_alpha_prev {
            plateaus += 1;
        }
        t_alpha_prev = t_alpha;
    }
    assert!(plateaus > 0, "expected trapping plateaus in the clock column");
    // no partial temp file left behind
    assert!(!Path::new(&format!("{}.tmp", file_a.display())).exists());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("params.toml");
    std::fs::write(
        &cfg,
        "alpha = 1.0\nhurst = 0.5\nsigma_s = 0.2\nr0 = 0.05\ns0 = 100.0\nstrike = 100.0\nmaturity = 1.0\n",
    )
    .unwrap();
    let from_file = sfmerton(&["price", "--config", cfg.to_str().unwrap()]);
    assert!(from_file.status.success(), "stderr: {}", stderr(&from_file));
    assert!(stdout(&from_file).contains("10.4506"));

    // flag overrides the file's sigma_s
    let overridden = sfmerton(&[
        "price", "--config", cfg.to_str().unwrap(), "--sigma-s", "0.4",
    ]);
    assert!(overridden.status.success());
    assert!(stdout(&overridden).contains("18.023"), "got:\n{}", stdout(&overridden));
}

#[test]
fn rejects_unknown_config_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "alpha = 0.9\nhurst = 0.6\nsigmar = 0.3\n").unwrap();
    let out = sfmerton(&["bond", "--config", cfg.to_str().unwrap(), "--r0", "0.05", "--maturity", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validation_error_exits_one() {
    let out = sfmerton(&[
        "price", "--alpha", "0.6", "--hurst", "0.9", "--r0", "0.05", "--s0", "100", "--strike",
        "100", "--maturity", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("\u{3b1}"), "stderr: {}", stderr(&out));
}

#[test]
fn missing_required_field_exits_one() {
    let out = sfmerton(&["price", "--alpha", "0.9", "--hurst", "0.6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("r0") || stderr(&out).contains("s0"));
}

#[test]
fn usage_error_exits_nonzero() {
    let out = sfmerton(&["price", "--alpha", "not-a-number"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_fast_suites_pass() {
    let out = sfmerton(&["check", "--suite", "parity,boundary,table"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS parity"));
    assert!(text.contains("PASS boundary"));
    assert!(text.contains("PASS table"));
}

#[test]
fn check_rejects_unknown_suite() {
    let out = sfmerton(&["check", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn paths_wider_alpha_range_is_accepted() {
    // alpha = 0.6 fails pricing validation but is legal for simulation.
    let out = sfmerton(&[
        "paths", "--alpha", "0.6", "--hurst", "0.5", "--sigma-s", "0.1", "--s0", "1", "--r0",
        "0.01", "--n-steps", "32", "--seed", "1",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
}
