use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rug::float::Constant;
use rug::Float;
use serde_json::Value;
use sha2::{Digest, Sha256};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn toolkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toolkit"))
        .args(args)
        .env_remove("TOOLKIT_PRECISION_BITS")
        .output()
        .unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = toolkit(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn split_gives_two_idempotents() {
    let qi = fixture("q_i.json");
    let v = json_ok(&[
        "algebra",
        "split",
        "--input",
        path(&qi),
        "--ell",
        "5",
        "--prec",
        "4",
    ]);
    assert_eq!(v["idempotents"].as_array().unwrap().len(), 2);
    assert_eq!(v["verified"], true);
    assert_eq!(v["N"], 4);
}

#[test]
fn usage_errors_exit_two() {
    let qi = fixture("q_i.json");
    assert_eq!(
        toolkit(&[
            "algebra",
            "split",
            "--input",
            path(&qi),
            "--ell",
            "5",
            "--bogus"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(toolkit(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        toolkit(&["algebra", "split", "--input", path(&qi)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn domain_errors_exit_one() {
    let qi = fixture("q_i.json");
    let out = toolkit(&["algebra", "split", "--input", path(&qi), "--ell", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let missing = toolkit(&["periods", "--curve", "/nonexistent/curve.json"]);
    assert_eq!(missing.status.code(), Some(1));
}

/// π / AGM(1, √2), the real period of y² = 4x³ − 4x.
fn agm_period(bits: u32) -> Float {
    let (mut a, mut b) = (Float::with_val(bits, 1), Float::with_val(bits, 2).sqrt());
    for _ in 0..64 {
        let next = Float::with_val(bits, &a + &b) / 2;
        b = Float::with_val(bits, &a * &b).sqrt();
        a = next;
    }
    Float::with_val(bits, Constant::Pi) / a
}

#[test]
fn periods_match_agm_to_128_bits() {
    let curve = fixture("lemniscatic.json");
    let v = json_ok(&["periods", "--curve", path(&curve), "--prec", "128"]);
    let got = Float::with_val(
        256,
        Float::parse(v["real_period"].as_str().unwrap()).unwrap(),
    );
    let diff = Float::with_val(256, &got - &agm_period(256)).abs();
    assert!(diff < Float::with_val(256, Float::i_exp(1, -100)), "{diff}");
    assert_eq!(v["precision_bits"], 128);
    assert_eq!(v["generators"].as_array().unwrap().len(), 2);
}

#[test]
fn precision_bits_default_and_env() {
    let curve = fixture("lemniscatic.json");
    let out = toolkit(&["periods", "--curve", path(&curve)]);
    let m: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(m["precision_bits"], 96);
    let out = Command::new(env!("CARGO_BIN_EXE_toolkit"))
        .args(["periods", "--curve", path(&curve)])
        .env("TOOLKIT_PRECISION_BITS", "64")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision_bits"], 64);
}

#[test]
fn manifest_digests_inputs_and_reruns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("engine_config.json");
    let oracles = fixture("engine_oracles.json");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = toolkit(&[
            "shafarevich",
            "simulate",
            "--config",
            path(&cfg),
            "--oracles",
            path(&oracles),
            "--seed",
            "7",
            "--out",
            path(&out),
        ]);
        assert_eq!(status.status.code(), Some(0));
        (
            std::fs::read(&out).unwrap(),
            std::fs::read_to_string(dir.path().join(format!("{name}.manifest.json"))).unwrap(),
        )
    };
    let (a, ma) = run("a.jsonl");
    let (b, _) = run("b.jsonl");
    assert_eq!(a, b);
    let m: Value = serde_json::from_str(&ma).unwrap();
    assert_eq!(m["subcommand"], "shafarevich simulate");
    assert_eq!(m["seed"], 7);
    let inputs = m["inputs"].as_array().unwrap();
    assert_eq!(inputs.len(), 2);
    for (entry, file) in inputs.iter().zip([&cfg, &oracles]) {
        let bytes = std::fs::read(file).unwrap();
        assert_eq!(entry["sha256"], format!("{:x}", Sha256::digest(&bytes)));
        assert_eq!(entry["bytes"], bytes.len());
    }
}

#[test]
fn shafarevich_emits_json_lines() {
    let cfg = fixture("engine_config.json");
    let oracles = fixture("engine_oracles.json");
    let out = toolkit(&[
        "shafarevich",
        "simulate",
        "--config",
        path(&cfg),
        "--oracles",
        path(&oracles),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let (summary, events) = lines.split_last().unwrap();
    for e in events {
        for key in ["iteration", "action", "N", "H"] {
            assert!(e.get(key).is_some(), "{e}");
        }
    }
    assert_eq!(summary["verdict"], "completed");
    let labels: Vec<&str> = summary["output"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["A2", "E0", "E1", "E1'"]);
}

#[test]
fn mordell_keeps_rational_points() {
    let cfg = fixture("engine_config.json");
    let oracles = fixture("engine_oracles.json");
    let v = json_ok(&[
        "mordell",
        "simulate",
        "--config",
        path(&cfg),
        "--oracles",
        path(&oracles),
    ]);
    let mut labels: Vec<&str> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["label"].as_str().unwrap())
        .collect();
    labels.sort();
    assert_eq!(labels, ["s0", "s2"]);
}

#[test]
fn algebra_tables() {
    let quat = fixture("quat_m1_m1.json");
    let v = json_ok(&["algebra", "invariants", "--input", path(&quat)]);
    assert_eq!(v["invariants"]["2"], "1/2");
    assert_eq!(v["invariants"]["inf"], "1/2");
    assert_eq!(v["real_splitting"]["signature"], serde_json::json!([1, 3]));
    let s5 = fixture("q_sqrt5.json");
    let v = json_ok(&["algebra", "maxorder", "--input", path(&s5), "--ell", "2"]);
    assert_eq!(v["basis"][0], serde_json::json!(["1/2", "1/2"]));
    let form = fixture("form.json");
    let v = json_ok(&["algebra", "signature", "--input", path(&form)]);
    assert_eq!(
        (
            v["d0"].as_u64(),
            v["d_plus"].as_u64(),
            v["d_minus"].as_u64()
        ),
        (Some(1), Some(1), Some(1))
    );
}

#[test]
fn curve_commands() {
    let curve = fixture("lemniscatic.json");
    let v = json_ok(&["endring", "--curve", path(&curve)]);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["discriminant"], -4);
    let v = json_ok(&["aptrace", "--curve", path(&curve), "--p", "5,7,13"]);
    let aps: Vec<i64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["a_p"].as_i64().unwrap())
        .collect();
    assert_eq!(aps, [-2, 0, 6]);
    let v = json_ok(&["torsion", "--curve", path(&curve), "--n", "2"]);
    assert_eq!(v["count"], 4);
}

#[test]
fn lattice_commands() {
    let lat = fixture("lattice.json");
    let v = json_ok(&[
        "lattice",
        "cover",
        "--input",
        path(&lat),
        "--point",
        "0.3,-0.7",
        "--radius",
        "3",
    ]);
    assert!(v["distance"].as_f64().unwrap() <= 3.0 * 2f64.sqrt() / 2.0);
    let v = json_ok(&["lattice", "gens", "--input", path(&lat), "--radius", "3"]);
    assert!(v["count"].as_u64().unwrap() >= 2);
}

#[test]
fn heisenberg_commands() {
    let v = json_ok(&["heisenberg", "autos", "--delta", "8"]);
    assert_eq!(v["symplectic_order"], 384);
    assert_eq!(v["lifts_per_symplectic_map"], 64);
    assert_eq!(v["automorphism_order"], 24576);
    let v = json_ok(&["heisenberg", "relations", "--delta", "8"]);
    assert_eq!(v["relations"], 16384);
    assert_eq!(v["translation_stable"], true);
    assert!(v["max_relative_residual"].as_f64().unwrap() < 1e-8);
    let v = json_ok(&["heisenberg", "rep", "--delta", "8", "--a", "1", "--l", "0"]);
    assert_eq!(v["matrix"]["dim"], 8);
    let v = json_ok(&["heisenberg", "orbit", "--delta", "8"]);
    assert_eq!(24576 % v["orbit_size"].as_u64().unwrap(), 0);
}
