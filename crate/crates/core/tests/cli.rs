use std::process::{Command, Output};

use serde_json::Value;

fn fastdec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fastdec")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_builtins() {
    let out = fastdec(&["analyze", "--builtin", "silver"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["exponent"], 5);
    assert!(v["report"]["g_group"].is_null());

    let v = json(&fastdec(&["analyze", "--builtin", "alamouti"]));
    assert_eq!(v["report"]["exponent"], 1);
    assert_eq!(v["report"]["g_group"], 4);
}

#[test]
fn analyze_basis_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("silver.json");
    fastdec::stbc::save_code(&fastdec::stbc::silver_code(), &path).unwrap();
    let out = fastdec(&["analyze", "--basis", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["exponent"], 5);
}

#[test]
fn malformed_and_singular_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 2,").unwrap();
    let out = fastdec(&["analyze", "--basis", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let singular = dir.path().join("singular.json");
    let zero = r#"{"n_rows":1,"n_cols":1,"entries":[[0.0,0.0]]}"#;
    let one = r#"{"n_rows":1,"n_cols":1,"entries":[[1.0,0.0]]}"#;
    std::fs::write(&singular, format!(r#"{{"name":"s","n":1,"l":1,"matrices":[{one},{zero}]}}"#)).unwrap();
    let out = fastdec(&["analyze", "--basis", singular.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("matrix 2"));
}

#[test]
fn usage_errors() {
    assert_eq!(fastdec(&["analyze"]).status.code(), Some(2));
    assert_eq!(fastdec(&["qr-verify", "--builtin", "silver", "--auto"]).status.code(), Some(2));
    assert_eq!(fastdec(&["oracle", "--seed", "1", "--max-vertices", "40"]).status.code(), Some(2));
    assert_eq!(fastdec(&["--help"]).status.code(), Some(0));
}

#[test]
fn bounds() {
    let v = json(&fastdec(&["bounds", "--n", "4", "--division"]));
    assert_eq!(v["g_max"], 4);
    let v = json(&fastdec(&["bounds", "--n", "8"]));
    assert_eq!(v["g_max"], 10);
    assert_eq!(fastdec(&["bounds", "--n", "8", "--ind", "3"]).status.code(), Some(2));
}

#[test]
fn construct_families() {
    for (family, param, count) in [("u", "3", 6), ("anticommute", "2", 7), ("mo", "1", 6)] {
        let out = fastdec(&["construct", "--family", family, "--ell", param]);
        assert_eq!(out.status.code(), Some(0), "{family}");
        assert_eq!(json(&out)["members"].as_array().unwrap().len(), count);
    }
    let out = fastdec(&["construct", "--family", "hre", "--t", "2"]);
    assert_eq!(json(&out)["report"]["count"], 5);
}

#[test]
fn qr_verify_with_partition_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("p.json");
    std::fs::write(&good, r#"{"groups":[[5],[6],[7],[8]],"remainder":[1,2,3,4]}"#).unwrap();
    let out = fastdec(&["qr-verify", "--builtin", "silver", "--partition", good.to_str().unwrap(), "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);

    let bad = dir.path().join("q.json");
    std::fs::write(&bad, r#"{"groups":[[1,2,3,4],[5,6,7,8]],"remainder":[]}"#).unwrap();
    let out = fastdec(&["qr-verify", "--builtin", "silver", "--partition", bad.to_str().unwrap(), "--seed", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_is_byte_identical_across_runs_and_threads() {
    let args = ["simulate", "--builtin", "silver", "--auto", "--trials", "20", "--n0", "0.1", "--seed", "5"];
    let a = fastdec(&args);
    let b = fastdec(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(fastdec(&seq).stdout, a.stdout);
    let v = json(&a);
    assert_eq!(v["agreement_rate"], 1.0);
    assert_eq!(v["mean_evals_fast"], 4352.0);
}

#[test]
fn simulate_csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trials.csv");
    let summary = dir.path().join("summary.json");
    let out = fastdec(&[
        "simulate", "--builtin", "alamouti", "--auto", "--trials", "5", "--n0", "0", "--seed", "1",
        "--format", "csv", "--out-csv", csv.to_str().unwrap(), "--out-summary", summary.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.as_bytes(), out.stdout.as_slice());
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("trial,agree,ser_contrib,evals_brute,evals_fast\n"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(v["symbol_error_rate"], 0.0);
}

#[test]
fn simulate_rejects_oversized_brute_force() {
    let out = fastdec(&["simulate", "--builtin", "silver", "--auto", "--n0", "0.1", "--seed", "1", "--constellation", "16"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_runs() {
    let out = fastdec(&["oracle", "--graphs", "50", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["agreements"], 50);
}
