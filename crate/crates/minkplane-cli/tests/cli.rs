//! End-to-end checks of the command-line surface: exit codes, file formats,
//! and config-driven reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minkplane"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn out_arg(dir: &Path, sub: &str) -> String {
    dir.join(sub).to_str().unwrap().to_string()
}

#[test]
fn distances_on_null_line_warns_with_status_4() {
    let dir = tempfile::tempdir().unwrap();
    let gen_out = out_arg(dir.path(), "gen");
    let status = run(&["generate", "--family", "null_line", "--n", "5", "--out", &gen_out]);
    assert!(status.status.success());

    let input = format!("{gen_out}/pointset.json");
    let dist_out = out_arg(dir.path(), "dist");
    let output = run(&["distances", "--input", &input, "--out", &dist_out]);
    assert_eq!(output.status.code(), Some(4));

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{dist_out}/distances_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["distance_count"], 1);
    assert_eq!(report["hypothesis_ok"], false);
    assert_eq!(report["quadruple_energy"], 0);
}

#[test]
fn incidence_two_point_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("points.json");
    fs::write(&input, r#"[["0","0"],["1","1"]]"#).unwrap();
    let out = out_arg(dir.path(), "inc");
    let output = run(&[
        "incidence",
        "--input",
        input.to_str().unwrap(),
        "--out",
        &out,
        "--format",
        "csv",
    ]);
    assert_eq!(output.status.code(), Some(0));

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{out}/incidence_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["n_points"], 2);
    assert_eq!(report["n_lines"], 4);
    assert_eq!(report["intersection_points"], 1);
    assert_eq!(report["identity"]["q_energy"], 4);
    assert_eq!(report["identity"]["n_star_sum"], 1);
    assert_eq!(report["identity"]["holds"], true);
    assert_eq!(report["oracle_quadruple_count"], 4);
    assert_eq!(report["oracle_matches"], true);
    let sigma = &report["points"][0];
    assert_eq!(sigma["x"], "0");
    assert_eq!(sigma["y"], "0");
    assert_eq!(sigma["z"], "1");
    assert_eq!(sigma["incident"], serde_json::json!([0, 3]));
    assert_eq!(sigma["n"], 1);
    assert_eq!(sigma["n_star"], 1);
    assert_eq!(report["audit"]["max_concurrency"], 2);

    let csv = fs::read_to_string(format!("{out}/per_k.csv")).unwrap();
    assert!(csv.starts_with("k,count,"));
    assert!(fs::metadata(format!("{out}/run_config.json")).unwrap().is_file());
}

#[test]
fn incidence_cap_is_enforced_with_guidance() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "inc");
    let output = run(&[
        "incidence",
        "--family",
        "random_rational",
        "--n",
        "9",
        "--n-cap",
        "8",
        "--out",
        &out,
    ]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("--n-cap"), "missing guidance: {stderr}");
}

#[test]
fn sweep_null_line_has_zero_energy_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "sweep");
    let output = run(&[
        "sweep",
        "--family",
        "null_line",
        "--sizes",
        "3..6",
        "--out",
        &out,
    ]);
    assert_eq!(output.status.code(), Some(0));
    let csv = fs::read_to_string(format!("{out}/sweep.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[4], "0", "nonzero energy in {row}");
        assert_eq!(cols[5], "0", "nonzero n* in {row}");
    }
}

#[test]
fn sweep_with_empty_sizes_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "sweep");
    let output = run(&["sweep", "--family", "grid", "--sizes", "", "--out", &out]);
    assert_eq!(output.status.code(), Some(0));
    let csv = fs::read_to_string(format!("{out}/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
    assert!(csv.starts_with("family,size,n,"));
}

#[test]
fn sumproduct_rejects_singletons() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.json");
    fs::write(&input, r#"["1"]"#).unwrap();
    let out = out_arg(dir.path(), "sp");
    let output = run(&["sumproduct", "--input", input.to_str().unwrap(), "--out", &out]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn sumproduct_reports_four_sign_choices() {
    let dir = tempfile::tempdir().unwrap();
    let gen_out = out_arg(dir.path(), "gen");
    run(&["generate", "--family", "progression", "--n", "8", "--out", &gen_out]);
    let input = format!("{gen_out}/realset.json");
    let out = out_arg(dir.path(), "sp");
    let output = run(&["sumproduct", "--input", &input, "--out", &out]);
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{out}/sumproduct_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["expanders"].as_array().unwrap().len(), 4);
    assert!(report["expanders"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["matches_grid"] == true));
    assert_eq!(report["multiplication_table"][7], serde_json::json!({"n": 8, "size": 30}));
}

#[test]
fn rerun_reproduces_reports_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "inc");
    let args = [
        "incidence",
        "--family",
        "perturbed_grid",
        "--n",
        "3",
        "--out",
        &out,
    ];
    assert!(run(&args).status.success());
    let report = format!("{out}/incidence_report.json");
    let first = fs::read(&report).unwrap();
    fs::remove_file(&report).unwrap();

    let config = format!("{out}/run_config.json");
    assert!(run(&["rerun", "--config", &config]).status.success());
    assert_eq!(first, fs::read(&report).unwrap());
}

#[test]
fn generate_rejects_unknown_family_and_conflicting_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path(), "gen");
    let output = run(&["generate", "--family", "nonsense", "--out", &out]);
    assert_eq!(output.status.code(), Some(1));

    let input = dir.path().join("points.json");
    fs::write(&input, r#"[["0","0"]]"#).unwrap();
    let output = run(&[
        "distances",
        "--input",
        input.to_str().unwrap(),
        "--family",
        "grid",
        "--out",
        &out,
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn malformed_point_sets_are_rejected_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("points.json");
    fs::write(&input, r#"[["1","1"],["1","1"]]"#).unwrap();
    let out = out_arg(dir.path(), "d");
    let output = run(&["distances", "--input", input.to_str().unwrap(), "--out", &out]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("duplicate point"), "stderr: {stderr}");
}
