use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use shifted_prime::arith::{sieve_lambda, LambdaTable};
use shifted_prime::diffsets::validate;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_shiftedprime"));
    c.env_remove("SHIFTEDPRIME_DATA");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn sieve_writes_psi_checkpoints() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("psi.csv");
    let o = run(&["sieve", "--limit", "10", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# config_hash = "));
    let rows = csv_rows(&text);
    assert_eq!(rows[0], ["x", "psi", "psi_minus_x", "prime_powers"]);
    let last = rows.last().unwrap();
    assert_eq!(last[0], "10");
    let psi10: f64 = last[1].parse().unwrap();
    // log 8 + log 9 + log 5 + log 7
    assert!((psi10 - (8f64 * 9.0 * 5.0 * 7.0).ln()).abs() < 1e-9);
    assert_eq!(last[3], "7");
}

#[test]
fn sieve_checkpoints_match_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("psi.csv");
    assert_eq!(code(&run(&["sieve", "--limit", "12345", "--out", s(&out)])), 0);
    let lam: LambdaTable = sieve_lambda(12345).unwrap();
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    let xs: Vec<u64> = rows[1..].iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(xs, [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000, 12345]);
    for r in &rows[1..] {
        let x: u64 = r[0].parse().unwrap();
        let psi: f64 = r[1].parse().unwrap();
        assert!((psi - lam.psi(x)).abs() < 1e-6, "x = {x}");
    }
}

#[test]
fn sieve_limit_one_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("psi.csv");
    assert_eq!(code(&run(&["sieve", "--limit", "1", "--out", s(&out)])), 0);
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows[1][0], "1");
    assert_eq!(rows[1][1].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn sieve_bad_path_fails() {
    let o = run(&["sieve", "--limit", "10", "--out", "/nonexistent-dir/psi.csv"]);
    assert_ne!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error[io]"));
}

#[test]
fn maxset_exact_small_case() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = run(&["maxset", "--N", "10", "--d", "1", "--mode", "exact", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("size 3"));
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows[0], ["N", "d", "solver", "size", "density", "bound"]);
    assert_eq!(rows[1][..4], ["10", "1", "exact", "3"]);
    let w: Value = serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(w["optimal"], true);
    let elements: Vec<u64> = serde_json::from_value(w["elements"].clone()).unwrap();
    assert_eq!(elements.len(), 3);
    assert!(elements.windows(2).all(|p| p[0] < p[1]));
    assert!(validate(&elements, 10, 1).unwrap().valid);
    assert_eq!(w["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn maxset_greedy_is_valid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    assert_eq!(code(&run(&["maxset", "--N", "5000", "--d", "2", "--mode", "greedy", "--out", s(&out)])), 0);
    let w: Value = serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    let elements: Vec<u64> = serde_json::from_value(w["elements"].clone()).unwrap();
    assert!(validate(&elements, 5000, 2).unwrap().valid);
}

#[test]
fn maxset_above_ceiling_is_a_hypothesis_violation() {
    assert_eq!(code(&run(&["maxset", "--N", "501", "--mode", "exact"])), 2);
}

#[test]
fn maxset_budget_exhaustion_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "node_budget = 1\n").unwrap();
    let o = run(&["maxset", "--N", "80", "--mode", "exact", "--config", s(&cfg)]);
    assert_eq!(code(&o), 4);
}

#[test]
fn dichotomy_on_shipped_fixture_is_unexceptional() {
    let o = run(&["dichotomy", "--D", "10", "--T", "10", "--zeros", s(&data_dir())]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["regime"], "unexceptional");
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn dichotomy_uses_the_environment_data_dir() {
    let o = bin()
        .args(["dichotomy", "--D", "10", "--T", "10"])
        .env("SHIFTEDPRIME_DATA", data_dir())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["regime"], "unexceptional");
}

#[test]
fn dichotomy_with_planted_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.txt");
    std::fs::write(&one, "# complete_to 20\n3 1 0.999 0\n").unwrap();
    let o = run(&["dichotomy", "--D", "10", "--T", "10", "--zeros", s(&data_dir()), "--zeros", s(&one)]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["regime"], "exceptional");
    assert_eq!(v["witness"]["character"], "3:1");
    assert_eq!(v["witness"]["beta"], 0.999);

    let two = dir.path().join("two.txt");
    std::fs::write(&two, "# complete_to 20\n3 1 0.999 0\n4 1 0.9995 0\n").unwrap();
    let o = run(&["dichotomy", "--D", "10", "--T", "10", "--zeros", s(&data_dir()), "--zeros", s(&two)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("lemma-violation"));

    // planted zeros alone leave zeta uncovered
    let o = run(&["dichotomy", "--D", "10", "--T", "10", "--zeros", s(&two)]);
    assert_eq!(code(&o), 3);
}

#[test]
fn verify_rejects_unknown_suite() {
    assert_eq!(code(&run(&["verify", "--suite", "nope"])), 64);
}

#[test]
fn verify_characters_passes() {
    let o = run(&["verify", "--suite", "characters"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "pass");
    assert!(!v["checks"].as_array().unwrap().is_empty());
}

#[test]
fn verify_explicit_passes_on_shipped_fixture() {
    let o = bin()
        .args(["verify", "--suite", "explicit"])
        .env("SHIFTEDPRIME_DATA", data_dir())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn verify_explicit_reports_incomplete_data() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["zeta_zeros.txt", "dirichlet_zeros.txt"] {
        let text = std::fs::read_to_string(data_dir().join(f)).unwrap();
        std::fs::write(dir.path().join(f), text.replace("# complete_to 1000", "# complete_to 40")).unwrap();
    }
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, format!("zeros_dir = {}\n", dir.path().display())).unwrap();
    let report = dir.path().join("report.json");
    let o = run(&["verify", "--suite", "explicit", "--config", s(&cfg), "--out", s(&report)]);
    assert_eq!(code(&o), 3);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["status"], "incomplete-data");
}

#[test]
fn verify_explicit_rejects_a_fixture_without_header() {
    let dir = tempfile::tempdir().unwrap();
    let zeta = std::fs::read_to_string(data_dir().join("zeta_zeros.txt")).unwrap();
    let stripped: String = zeta.lines().filter(|l| !l.contains("complete_to")).map(|l| format!("{l}\n")).collect();
    std::fs::write(dir.path().join("zeta_zeros.txt"), stripped).unwrap();
    std::fs::copy(data_dir().join("dirichlet_zeros.txt"), dir.path().join("dirichlet_zeros.txt")).unwrap();
    let o = bin()
        .args(["verify", "--suite", "explicit"])
        .env("SHIFTEDPRIME_DATA", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn config_with_small_big_c1_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "C1 = 5\n").unwrap();
    let o = run(&["verify", "--suite", "characters", "--config", s(&cfg)]);
    assert_eq!(code(&o), 64);
}

#[test]
fn increment_zero_steps_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.jsonl");
    let o = run(&["increment", "--N", "1000", "--steps", "0", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let lines: Vec<Value> = std::fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["record"], "config");
    assert_eq!(lines[1]["record"], "halt");
    assert_eq!(lines[1]["steps"], 0);
}

#[test]
fn increment_step_records_a_denser_progression() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.jsonl");
    let energy = dir.path().join("e.csv");
    let o = run(&["increment", "--N", "3000", "--steps", "2", "--out", s(&out), "--energy", s(&energy)]);
    assert_eq!(code(&o), 0);
    let lines: Vec<Value> = std::fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let step = &lines[1];
    assert_eq!(step["record"], "step");
    assert_eq!(step["config_hash"], lines[0]["config_hash"]);
    if step["found"] == true {
        assert!(step["new_density"].as_f64().unwrap() > step["alpha"].as_f64().unwrap());
        assert!(step["progression"]["difference"].as_u64().unwrap() >= 1);
    }
    let rows = csv_rows(&std::fs::read_to_string(&energy).unwrap());
    assert_eq!(rows[0], ["q", "energy"]);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "seed = 3\nzeroed_thresholds = true\n").unwrap();
    let mut files = Vec::new();
    for i in 0..2 {
        let t = dir.path().join(format!("t{i}.jsonl"));
        let m = dir.path().join(format!("m{i}.csv"));
        let c = dir.path().join(format!("c{i}.csv"));
        assert_eq!(code(&run(&["increment", "--N", "2000", "--steps", "2", "--config", s(&cfg), "--out", s(&t)])), 0);
        assert_eq!(code(&run(&["maxset", "--N", "40", "--d", "2", "--config", s(&cfg), "--out", s(&m)])), 0);
        assert_eq!(code(&run(&["characters", "--max-q", "12", "--config", s(&cfg), "--out", s(&c)])), 0);
        files.push([t, m.clone(), m.with_extension("json"), c]);
    }
    for (a, b) in files[0].iter().zip(&files[1]) {
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), "{}", a.display());
    }
}

#[test]
fn config_hash_tracks_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let hash_of = |text: &str, name: &str| {
        let cfg = dir.path().join(format!("{name}.cfg"));
        std::fs::write(&cfg, text).unwrap();
        let out = dir.path().join(format!("{name}.csv"));
        assert_eq!(code(&run(&["characters", "--max-q", "3", "--config", s(&cfg), "--out", s(&out)])), 0);
        let text = std::fs::read_to_string(&out).unwrap();
        text.lines()
            .find_map(|l| l.strip_prefix("# config_hash = ").map(str::to_string))
            .unwrap()
    };
    assert_eq!(hash_of("seed = 0\n", "a"), hash_of("# comment only\n", "b"));
    assert_ne!(hash_of("seed = 0\n", "c"), hash_of("seed = 1\n", "d"));
}

#[test]
fn characters_table_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    assert_eq!(code(&run(&["characters", "--max-q", "5", "--primitive-only", "--out", s(&out)])), 0);
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows[0], ["q", "index", "conductor", "primitive", "real", "parity", "phases"]);
    let ids: Vec<String> = rows[1..].iter().map(|r| format!("{}:{}", r[0], r[1])).collect();
    // mod 5 has three primitive characters; 4 has one, 3 has one, 2 none
    assert_eq!(ids, ["1:0", "3:1", "4:1", "5:1", "5:2", "5:3"]);
    let mod4 = &rows[3];
    assert_eq!(mod4[5], "-1");
    assert_eq!(mod4[6], "*;0/2;*;1/2");
}
