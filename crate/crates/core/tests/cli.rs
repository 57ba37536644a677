use std::process::Command;

use hypvol::chains::read_chain;
use num_rational::Rational64;

fn hypvol(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hypvol")).args(args).env_remove("HYPVOL_SEED").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(hypvol(&["cocycle-check", "--samples", "20"]).0, 0);
    assert_eq!(hypvol(&["certify-schottky", "--family", "h-alpha-beta-log"]).0, 2);
    assert_eq!(hypvol(&["certify-dense", "--family", "h-alpha-beta", "--max-len", "2"]).0, 2);
    assert_eq!(hypvol(&["find-exponents", "--theta", "0.5,0.5", "--scan-bound", "100"]).0, 3);
    assert_eq!(hypvol(&["approximate", "--eps", "1e-9", "--max-depth", "1"]).0, 3);
    assert_eq!(hypvol(&["borel-check", "--n", "1"]).0, 4);
    assert_eq!(hypvol(&["certify-dense", "--alpha", "x"]).0, 4);
    assert_eq!(hypvol(&["nonsense"]).0, 4);
    assert_eq!(hypvol(&["--help"]).0, 0);
    // A tolerance of zero cannot be met.
    assert_eq!(hypvol(&["cocycle-check", "--samples", "20", "--tol", "0"]).0, 1);
}

#[test]
fn errors_are_reported_as_json() {
    let (code, out, err) = hypvol(&["certify-schottky", "--family", "h-alpha-beta-log"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["status"], "discs-overlap");
    assert_eq!(json(err.lines().next().unwrap())["error"], "discs-overlap");
}

#[test]
fn files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let chain = dir.path().join("z.chain");
    let doc = dir.path().join("out.json");
    let (code, out, _) = hypvol(&[
        "surface-chain",
        "--genus",
        "3",
        "--emit",
        chain.to_str().unwrap(),
        "--out",
        doc.to_str().unwrap(),
    ]);
    assert_eq!((code, out.as_str()), (0, ""));
    let z = read_chain::<Rational64>(&std::fs::read_to_string(&chain).unwrap()).unwrap();
    assert_eq!(z.len(), 10);
    let v = json(&std::fs::read_to_string(&doc).unwrap());
    assert_eq!(v["result"]["norm"], "10");
    assert_eq!(v["config"]["seed"], 42);

    let csv = dir.path().join("b.csv");
    let (code, _, _) = hypvol(&["seminorm-bound", "--genus-max", "4", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "parameter,value,norm,boundary_norm,ratio,bound");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hypvol"))
        .args(["cocycle-check", "--samples", "5"])
        .env("HYPVOL_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(json(&String::from_utf8(out.stdout).unwrap())["config"]["seed"], 7);
}

#[test]
fn floats_carry_seventeen_digits() {
    let (_, out, _) = hypvol(&["cocycle-check", "--samples", "5"]);
    let v = json(&out);
    assert_eq!(v["result"]["d_regular"].as_f64().unwrap(), hypvol::volume::V3);
    assert!(out.contains("\"d_regular\":1.0149416064096537e0"));
}
