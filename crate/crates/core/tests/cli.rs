use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use spinobs::cli::ReportDocument;
use tempfile::tempdir;

fn spinobs() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spinobs"));
    cmd.env_remove("SPINOBS_THREADS");
    cmd
}

fn run(args: &[&str]) -> Output {
    spinobs().args(args).output().expect("binary should run")
}

fn run_with_threads(args: &[&str], threads: &str) -> Output {
    spinobs()
        .env("SPINOBS_THREADS", threads)
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("stderr is utf-8")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    fs::read_to_string(path).expect("golden file should exist")
}

#[test]
fn report_table_matches_golden() {
    let out = run(&["report", "--state", "1 0 0 up"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    // residual diagnostics depend on rounding details, the rest is fixed
    let text: String = stdout(&out)
        .lines()
        .filter(|l| !l.starts_with("max_discrepancy") && !l.starts_with("convergence_estimate"))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(text, golden("report_1s.txt"));
    assert!(text.contains("J_momentum_z = 0.500000000"));
    assert!(text.contains("J_bowman_z = 1.000000000"));
    assert!(text.contains("mu_z = -1.000000000"));
}

#[test]
fn report_json_round_trips() {
    let out = run(&["report", "--state", "2 1 1 up", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: ReportDocument = serde_json::from_str(&stdout(&out)).unwrap();
    let again = serde_json::to_string_pretty(&doc).unwrap();
    let back: ReportDocument = serde_json::from_str(&again).unwrap();
    assert_eq!(doc, back);
    assert_eq!(doc.state, "2 1 1 up");
    assert!((doc.j_momentum[2] - 1.5).abs() < 1e-7);
    assert!((doc.j_bowman[2] - 2.0).abs() < 1e-7);
    assert!((doc.mu[2] + 2.0).abs() < 1e-7);
}

#[test]
fn report_json_key_order() {
    let out = run(&["report", "--state", "1 0 0 up", "--format", "json"]);
    let text = stdout(&out);
    let keys = [
        "\"state\"",
        "\"units\"",
        "\"L\"",
        "\"S_momentum\"",
        "\"S_massflow\"",
        "\"J_momentum\"",
        "\"J_bowman\"",
        "\"mu\"",
        "\"g_spin\"",
        "\"oracle\"",
        "\"max_discrepancy\"",
        "\"convergence_estimate\"",
    ];
    let positions: Vec<usize> = keys.iter().map(|k| text.find(&format!("\n  {k}:")).expect(k)).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{positions:?}");
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["units"]["J"], "hbar");
    assert_eq!(value["units"]["mu"], "bohr_magneton");
}

#[test]
fn report_from_state_file() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("coupled.json");
    fs::write(
        &path,
        r#"{"Z": 1.0, "terms": [{"n": 2, "l": 1, "j": "1/2", "mj": 0.5}]}"#,
    )
    .unwrap();
    let out = run(&["report", "--state-file", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: ReportDocument = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((doc.oracle.spin[2] + 1.0 / 6.0).abs() < 1e-12);
    assert!((doc.j_momentum[2] - 0.5).abs() < 1e-7);
    assert!((doc.j_bowman[2] - 1.0 / 3.0).abs() < 1e-7);
}

#[test]
fn report_gaussian_json_state() {
    let spec = r#"{"gaussian": {"sigma": 1.0, "spinor": [[1, 0], [0, 0]]}}"#;
    let out = run(&["report", "--state", spec, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: ReportDocument = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((doc.j_momentum[2] - 0.5).abs() < 1e-7);
    assert!((doc.j_bowman[2] - 1.0).abs() < 1e-7);
    assert!((doc.mu[2] + 1.0).abs() < 1e-7);
}

#[test]
fn report_writes_out_file() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run(&[
        "report",
        "--state",
        "1 0 0 up",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("state,units_J,units_mu,L_x,L_y,L_z,S_momentum_x"));
    assert!(header.ends_with("max_discrepancy,convergence_estimate"));
    let row = lines.next().unwrap();
    assert_eq!(header.split(',').count(), row.split(',').count());
    assert!(lines.next().is_none());
}

#[test]
fn coarse_grid_exits_with_convergence_warning() {
    let out = run(&["report", "--state", "1 0 0 up", "--nr", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("warning"), "{}", stderr(&out));
    assert!(stdout(&out).contains("J_momentum_z"));
}

#[test]
fn malformed_spec_names_token() {
    let out = run(&["report", "--state", "1 0 0 sideways"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("sideways"));

    let out = run(&["report", "--state", "1 1 0 up"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&[
        "report",
        "--state",
        r#"{"terms": [{"n": 1, "l": 0, "m": 0, "spin": "up", "colour": 1}]}"#,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("colour"), "{}", stderr(&out));
}

#[test]
fn bad_flags_are_input_errors() {
    for args in [
        &["report", "--state", "1 0 0 up", "--nr", "0"][..],
        &["report", "--state", "1 0 0 up", "--rmax", "-3"][..],
        &["report", "--state", "1 0 0 up", "--Z", "0"][..],
        &["report", "--state", "1 0 0 up", "--format", "xml"][..],
        &["report"][..],
        &["report", "--state-file", "/nonexistent/state.json"][..],
        &["report", "--state", "1 0 0 up", "--out", "/nonexistent/dir/report.txt"][..],
        &["frobnicate"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn help_exits_zero_and_hides_test_hook() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["check", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("simulate-bug"));
}

#[test]
fn compare_rows_show_spin_difference() {
    let out = run(&[
        "compare", "--state", "1 0 0 up", "--state", "2 0 0 up", "--state", "2 1 1 up", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).expect(name);
    let (dx, dy, dz) = (col("difference_x"), col("difference_y"), col("difference_z"));
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let d: Vec<f64> = [dx, dy, dz].iter().map(|&i| row[i].parse().unwrap()).collect();
        assert!(
            d[0].abs() < 1e-7 && d[1].abs() < 1e-7 && (d[2] - 0.5).abs() < 1e-7,
            "{row:?}"
        );
    }
}

#[test]
fn compare_coupled_state_difference() {
    let out = run(&["compare", "--state", "2 1 1/2 1/2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(
        stdout(&out).contains("(0.000000000, 0.000000000, -0.166666667)"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn compare_without_states_prints_usage() {
    let out = run(&["compare"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Usage"));
}

#[test]
fn check_passes_and_is_reproducible() {
    let a = run(&["check", "--seed", "7"]);
    let b = run(&["check", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("11/11 checks passed"));
}

#[test]
fn simulated_bug_fails_check() {
    let out = run(&["check", "--simulate-bug", "spin-coeff"]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.contains("FAIL factor_of_two_pointwise"), "{text}");
}

#[test]
fn simulated_bug_doubles_momentum_prescription() {
    let out = run(&["report", "--state", "1 0 0 up", "--simulate-bug", "spin-coeff"]);
    assert!(stdout(&out).contains("J_momentum_z = 1.000000000"));
}

#[test]
fn output_independent_of_worker_count() {
    for args in [
        &["report", "--state", "3 2 1 down; 2 1 -1 up 0.5 0.5", "--format", "json"][..],
        &["check", "--seed", "3"][..],
    ] {
        let base = run_with_threads(args, "1");
        for threads in ["2", "8"] {
            let other = run_with_threads(args, threads);
            assert_eq!(base.stdout, other.stdout, "{args:?} with {threads} workers");
            assert_eq!(base.status.code(), other.status.code());
        }
    }
}

#[test]
fn invalid_thread_count_is_input_error() {
    let out = run_with_threads(&["report", "--state", "1 0 0 up"], "zero");
    assert_eq!(out.status.code(), Some(1));
}
