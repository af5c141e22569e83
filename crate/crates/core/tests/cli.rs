//! End-to-end checks of the command-line interface: output values, JSON
//! round trips, determinism, and exit codes.

use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toric-vortex"))
}

fn write_problem(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("toric-vortex-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(text.as_bytes()).unwrap();
    path
}

const THREEFOLD: &str = r#"{
    "k": 2,
    "weights": [[1,0],[1,1],[0,1],[0,1],[0,1]],
    "tau": [2, 4]
}"#;

#[test]
fn invariant_values_match_printed_examples() {
    let cp1 = write_problem("cp1.json", r#"{"k":1,"weights":[[1],[1]],"tau":[1]}"#);
    let out = bin()
        .args(["invariant"])
        .arg(&cp1)
        .args(["--lambda", "1", "--ell", "2,1", "--mode", "checked"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");

    let wps = write_problem("wps12.json", r#"{"k":1,"weights":[[1],[2]],"tau":[1]}"#);
    let out = bin()
        .args(["invariant"])
        .arg(&wps)
        .args(["--lambda", "0", "--ell", "1,0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1/2");

    let three = write_problem("threefold.json", THREEFOLD);
    let out = bin()
        .args(["invariant"])
        .arg(&three)
        .args(["--lambda", "0,0", "--ell", "1,1,1,0,0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0");
}

#[test]
fn rank1_and_gw() {
    let out = bin()
        .args(["rank1", "--weights", "1,2", "--d", "1", "--g", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "9/2");

    let cp2 = write_problem("cp2.json", r#"{"k":1,"weights":[[1],[1],[1]],"tau":[3]}"#);
    let out = bin()
        .args(["gw"])
        .arg(&cp2)
        .args(["--lambda", "1", "--ell", "1,2,2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");
}

#[test]
fn analyze_json_roundtrip_and_determinism() {
    let three = write_problem("threefold2.json", THREEFOLD);
    let run = || {
        bin()
            .args(["analyze"])
            .arg(&three)
            .arg("--json")
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "byte-identical reports");
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["minimal_chern_number"], "2");
    assert_eq!(v["regular"], true);
    assert_eq!(v["free"], true);
    assert_eq!(v["monotone"], true);
    assert_eq!(v["euler_characteristic"], "6");
    let effective: Vec<Vec<String>> =
        serde_json::from_value(v["effective_generators"].clone()).unwrap();
    assert_eq!(
        effective,
        vec![
            vec!["-1".to_string(), "1".to_string()],
            vec!["1".to_string(), "0".to_string()]
        ]
    );
    // every rational string in the report re-parses exactly
    for s in v["tau"].as_array().unwrap() {
        toric_vortex::input::parse_rat_str(s.as_str().unwrap()).unwrap();
    }
}

#[test]
fn quantum_presentation_and_verification() {
    let three = write_problem("threefold3.json", THREEFOLD);
    let out = bin()
        .args(["quantum"])
        .arg(&three)
        .args(["--verify", "5", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let quantum = v["presentation"]["quantum"].as_array().unwrap();
    assert_eq!(quantum.len(), 2);
    assert_eq!(quantum[0]["dplus"], serde_json::json!([1, 1, 0, 0, 0]));
    assert_eq!(quantum[1]["dplus"], serde_json::json!([0, 0, 1, 1, 1]));
    assert_eq!(quantum[1]["dminus"], serde_json::json!([1, 0, 0, 0, 0]));
    let verified: Vec<String> = serde_json::from_value(v["verified"].clone()).unwrap();
    assert_eq!(verified, vec!["5/5".to_string(), "5/5".to_string()]);
}

#[test]
fn wallcross_identity_from_cli() {
    let three = write_problem("threefold4.json", THREEFOLD);
    let out = bin()
        .args(["wallcross"])
        .arg(&three)
        .args(["--wall", "2", "--lambda", "0,0", "--ell", "3,0,0,0,0", "--json"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn exit_codes() {
    // parse error: malformed weights
    let bad = write_problem("bad.json", r#"{"k":2,"weights":[[1,0],[1]],"tau":[1,1]}"#);
    let out = bin().args(["analyze"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // float literals rejected
    let float = write_problem("float.json", r#"{"k":1,"weights":[[1],[1]],"tau":[0.5]}"#);
    let out = bin().args(["analyze"]).arg(&float).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // singular geometry: invariant at a singular parameter
    let sing = write_problem("sing.json", r#"{"k":1,"weights":[[1],[1]],"tau":[0]}"#);
    let out = bin()
        .args(["invariant"])
        .arg(&sing)
        .args(["--lambda", "0", "--ell", "1,0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // improper system
    let improper = write_problem("improper.json", r#"{"k":1,"weights":[[1],[-1]],"tau":[1]}"#);
    let out = bin().args(["analyze"]).arg(&improper).output().unwrap();
    assert_eq!(out.status.code(), Some(3));

    // analyze at a singular parameter reports what it can, then exits 3
    let sing2 = write_problem("sing2.json", r#"{"k":1,"weights":[[1],[1]],"tau":[0]}"#);
    let out = bin().args(["analyze"]).arg(&sing2).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("regular: false"));
}

#[test]
fn cohomology_output() {
    let cp2 = write_problem("cp2b.json", r#"{"k":1,"weights":[[1],[1],[1]],"tau":[3]}"#);
    let out = bin()
        .args(["cohomology"])
        .arg(&cp2)
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["betti"], serde_json::json!(["1", "1", "1"]));
    assert_eq!(
        v["presentation"]["monomial"],
        serde_json::json!([[1, 2, 3]])
    );
}
