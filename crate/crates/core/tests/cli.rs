mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::*;
use serde_json::Value;

fn diaq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diaq")).args(args).env_remove("DIAQ_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    fixtures_dir().join(name).to_string_lossy().into_owned()
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/run-output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

#[test]
fn run_emits_ghz_state() {
    let o = diaq(&["run", &fixture("ghz_n4.qasm"), "--backend", "diaq", "--shots", "0", "--emit-state"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(schema().is_valid(&v));
    let mut broken = v.clone();
    broken["backend"] = "gpu".into();
    assert!(!schema().is_valid(&broken));
    assert_eq!(v["n_qubits"], 4);
    assert_eq!(v["circuit"], "ghz_n4");
    let state = v["state"].as_array().unwrap();
    assert_eq!(state.len(), 16);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (i, amp) in state.iter().enumerate() {
        let want = if i == 0 || i == 15 { s } else { 0.0 };
        assert!((amp[0].as_f64().unwrap() - want).abs() < 1e-12 && amp[1].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn counts_identical_across_backends() {
    let counts = |backend: &str| {
        let o = diaq(&["run", &fixture("ghz_n4.qasm"), "--backend", backend, "--seed", "7", "--shots", "1024"]);
        assert!(o.status.success());
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(schema().is_valid(&v));
        v["counts"].clone()
    };
    let dense = counts("dense");
    assert_eq!(dense, counts("diaq"));
    assert_eq!(dense.as_object().unwrap().keys().collect::<Vec<_>>(), ["0000", "1111"]);
}

#[test]
fn every_fixture_output_validates() {
    let validator = schema();
    for (name, _) in fixtures() {
        for extra in [&[][..], &["--emit-state", "--fusion", "on"][..], &["--precision", "single"][..]] {
            let file = fixture(&format!("{name}.qasm"));
            let mut args = vec!["run", file.as_str(), "--shots", "64"];
            args.extend_from_slice(extra);
            let o = diaq(&args);
            assert!(o.status.success(), "{name}: {}", stderr(&o));
            let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
            assert!(validator.is_valid(&v), "{name} {extra:?}");
        }
    }
}

#[test]
fn exit_codes() {
    let invalid = |f: &str| fixtures_dir().join("invalid").join(f).to_string_lossy().into_owned();

    let o = diaq(&["run", &invalid("missing_semicolon.qasm")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing_semicolon.qasm:5:1:"), "{}", stderr(&o));

    for f in ["classical_if.qasm", "reset.qasm", "unknown_gate.qasm"] {
        assert_eq!(diaq(&["run", &invalid(f)]).status.code(), Some(3), "{f}");
    }

    let o = diaq(&["run", &fixture("ghz_n4.qasm"), "--max-qubits", "3"]);
    assert_eq!(o.status.code(), Some(4));
    let o = diaq(&["run", &fixture("mixed_n5.qasm"), "--span-limit", "2"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert_eq!(diaq(&["run", "/nonexistent.qasm"]).status.code(), Some(1));
    assert_eq!(diaq(&["run", &fixture("ghz_n4.qasm"), "--backend", "gpu"]).status.code(), Some(64));
}

#[test]
fn csv_run_output() {
    let o = diaq(&["run", &fixture("bv_n6.qasm"), "--out", "csv", "--shots", "10"]);
    assert_eq!(stdout(&o), "bitstring,count\n101101,10\n");
}

#[test]
fn threads_do_not_change_output() {
    let run = |threads: &str| {
        let o = diaq(&["--threads", threads, "run", &fixture("qft_n5.qasm"), "--emit-state", "--seed", "3"]);
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        v.as_object_mut().unwrap().remove("timings_ns");
        v
    };
    assert_eq!(run("1"), run("4"));
    let o = Command::new(env!("CARGO_BIN_EXE_diaq"))
        .args(["run", &fixture("ghz_n4.qasm"), "--shots", "8"])
        .env("DIAQ_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn bench_row_accounting() {
    let dir = tempfile::tempdir().unwrap();
    let ghz = dir.path().join("ghz12.qasm");
    std::fs::write(&ghz, diaq::circuits::ghz_qasm(12)).unwrap();
    let bad = fixtures_dir().join("invalid/missing_semicolon.qasm");
    let out = dir.path().join("bench.csv");
    let o = diaq(&[
        "bench",
        ghz.to_str().unwrap(),
        bad.to_str().unwrap(),
        "--reps",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert_eq!(header, diaq::cli::BENCH_HEADER.split(',').collect::<Vec<_>>());
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();

    let ghz_rows: Vec<_> = rows.iter().filter(|r| r[col("circuit")] == "ghz12").collect();
    assert_eq!(ghz_rows.iter().filter(|r| r[col("row")] == "detail").count(), 6);
    let summaries: Vec<_> = ghz_rows.iter().filter(|r| r[col("row")] == "summary").collect();
    assert_eq!(summaries.len(), 2);
    for s in &summaries {
        assert!(s[col("speedup")].parse::<f64>().unwrap() > 0.0);
        assert!(s[col("mean_ns")].parse::<f64>().unwrap() > 0.0);
    }
    for r in ghz_rows.iter().filter(|r| r[col("row")] == "detail") {
        assert_eq!(r[col("status")], "ok");
        assert!((1..=3).contains(&r[col("rep")].parse::<usize>().unwrap()));
        assert_eq!(r[col("shots")], "1024");
    }
    let failed: Vec<_> = rows.iter().filter(|r| r[col("circuit")] == "missing_semicolon").collect();
    assert_eq!(failed.len(), 2);
    assert!(failed.iter().all(|r| r[col("status")] == "parse_error"));
}

#[test]
fn analyze_modes() {
    let dir = tempfile::tempdir().unwrap();
    let ghz10 = dir.path().join("ghz10.qasm");
    std::fs::write(&ghz10, diaq::circuits::ghz_qasm(10)).unwrap();
    let o = diaq(&["analyze", ghz10.to_str().unwrap(), "--eps", "1e-15", "--mode", "chain"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with(diaq::analysis::CSV_HEADER));
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.split(',').nth(2).unwrap().parse::<f64>().unwrap() >= 0.998));

    let zs = dir.path().join("z.qasm");
    std::fs::write(&zs, "OPENQASM 2.0;\nqreg q[4];\nz q;\nz q[2];\n").unwrap();
    let o = diaq(&["analyze", zs.to_str().unwrap(), "--mode", "timestep"]);
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.lines().skip(1).all(|r| r.split(',').nth(3) == Some("1")));

    let out = dir.path().join("both.csv");
    let o = diaq(&["analyze", zs.to_str().unwrap(), "--mode", "both", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(out).unwrap();
    assert!(csv.starts_with("mode,timestep,"));
    assert_eq!(csv.lines().filter(|l| l.starts_with("timestep,")).count(), 5);
    assert_eq!(csv.lines().filter(|l| l.starts_with("chain,")).count(), 5);

    let o = diaq(&["analyze", zs.to_str().unwrap(), "--format", "json", "--mode", "both"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["chain"].as_array().unwrap().len(), 5);

    let big = dir.path().join("ghz15.qasm");
    std::fs::write(&big, diaq::circuits::ghz_qasm(15)).unwrap();
    assert_eq!(diaq(&["analyze", big.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn gen_round_trips_through_run() {
    let o = diaq(&["gen", "qft", "--qubits", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), diaq::circuits::qft_qasm(3));
    assert_eq!(diaq(&["gen", "ghz", "--qubits", "0"]).status.code(), Some(64));
}
