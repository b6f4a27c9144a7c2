use std::process::{Command, Output};

use ewitness::scan::read_csv;

fn ewitness(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ewitness")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn detect_choi_json() {
    let out = ewitness(&["detect", "--state", "choi", "--d", "3", "--p", "0.25", "--mu", "0.3,0.7", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["report"]["detected"], true);
    let value = v["report"]["value"].as_f64().unwrap();
    assert!((value + 0.0255427).abs() < 1e-6, "{value}");
}

#[test]
fn detect_infers_last_weight() {
    let out = ewitness(&["detect", "--state", "choi", "--d", "3", "--p", "0.25", "--mu", "0.3", "--format", "json"]);
    assert!(out.status.success());
    assert!((json(&out)["report"]["value"].as_f64().unwrap() + 0.0255427).abs() < 1e-6);
}

#[test]
fn detect_upb_text() {
    let out = ewitness(&["detect", "--state", "upb-tiles"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("value: -0.087412"), "{text}");
    assert!(text.contains("detected: true"));
}

#[test]
fn first_set_basis() {
    let out = ewitness(&["detect", "--state", "horodecki-alpha", "--alpha", "4", "--basis", "generator", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["basis"], "generator");
}

#[test]
fn ppt_reports_bound_for_choi() {
    let out = ewitness(&["ppt", "--state", "choi", "--d", "3", "--p", "0.25", "--mu", "0.3,0.7", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["ppt"], true);
    assert!((v["ppt_bound"].as_f64().unwrap() - 0.3142496).abs() < 1e-6);
}

#[test]
fn ppt_flags_npt_state() {
    let out = ewitness(&["ppt", "--state", "horodecki-alpha", "--alpha", "5", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["ppt"], false);
}

#[test]
fn witness_emit_writes_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let out = ewitness(&["witness", "--state", "upb-tiles", "--emit", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("constraint: pass"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["dA"], 3);
    assert_eq!(v["A"].as_array().unwrap().len(), 9);
    assert_eq!(v["labels_a"][0], "E00");
}

#[test]
fn validate_passes_for_catalog_state() {
    let out = ewitness(&["validate", "--state", "horodecki-a", "--a", "0.5", "--restarts", "8", "--iters", "80"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("result: pass"));
}

#[test]
fn json_state_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.json");
    // |00><00| on two qubits
    let mut rows = vec![vec![[0.0, 0.0]; 4]; 4];
    rows[0][0] = [1.0, 0.0];
    let doc = serde_json::json!({ "dA": 2, "dB": 2, "matrix": rows });
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = ewitness(&["detect", "--json", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["report"]["detected"], false);
    assert!(v["report"]["value"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn invalid_json_state_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let doc = serde_json::json!({ "dA": 2, "dB": 1, "matrix": [[[2.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]] });
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = ewitness(&["detect", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = ewitness(&[
        "scan", "--family", "choi", "--d", "4", "--mu-steps", "11", "--p-steps", "6", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("points"));
    let parsed = read_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(parsed.param_names, vec!["mu1", "mu3", "p"]);
    assert!(!parsed.points.is_empty());
}

#[test]
fn scan_one_parameter_family() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alpha.json");
    let out = ewitness(&[
        "scan", "--family", "horodecki-alpha", "--steps", "21", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 21);
}

#[test]
fn catalog_lists_families() {
    let out = ewitness(&["catalog", "--format", "json"]);
    assert!(out.status.success());
    let names: Vec<String> =
        json(&out).as_array().unwrap().iter().map(|f| f["family"].as_str().unwrap().to_string()).collect();
    assert_eq!(names, ["horodecki-alpha", "upb-tiles", "horodecki-a", "choi"]);
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(ewitness(&["detect", "--state", "werner"]).status.code(), Some(2));
    assert_eq!(ewitness(&["detect", "--state", "horodecki-alpha"]).status.code(), Some(2));
    assert_eq!(ewitness(&["detect", "--state", "horodecki-alpha", "--alpha", "7"]).status.code(), Some(2));
    assert_eq!(ewitness(&["detect", "--state", "choi", "--d", "3", "--p", "0.5", "--mu", "0.3"]).status.code(), Some(2));
    assert_eq!(ewitness(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn missing_file_exits_4() {
    let out = ewitness(&["detect", "--json", "/nonexistent/rho.json"]);
    assert_eq!(out.status.code(), Some(4));
}
