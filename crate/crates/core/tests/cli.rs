use std::path::Path;
use std::process::{Command, Output};

use swnlab::config::{Format, RunConfig};

fn swnlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swnlab")).args(args).output().expect("binary runs")
}

fn reports(path: &Path) -> Vec<serde_json::Value> {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn wick_verify_exit_codes() {
    let ok = swnlab(&["wick", "verify", "[N(x), Bd(y)]", "2 delta(x,y) Bd(y)"]);
    assert_eq!(ok.status.code(), Some(0));
    let wrong = swnlab(&["wick", "verify", "[N(x), Bd(y)]", "Bd(y)"]);
    assert_eq!(wrong.status.code(), Some(1));
    let broken = swnlab(&["wick", "verify", "[N(x), Bd(y)", "0"]);
    assert_eq!(broken.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&broken.stderr).contains("error"));
}

#[test]
fn wick_verify_with_substituted_c() {
    let sym = swnlab(&["wick", "verify", "[B(x), Bd(y)]", "4 delta(x,y) + 4 delta(x,y) N(y)"]);
    assert_eq!(sym.status.code(), Some(1));
    let two = swnlab(&["wick", "verify", "--c", "2", "[B(x), Bd(y)]", "4 delta(x,y) + 4 delta(x,y) N(y)"]);
    assert_eq!(two.status.code(), Some(0));
}

#[test]
fn wick_corpus_file() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("ids.txt");
    std::fs::write(&corpus, "# two cases\n[N(x), N(y)] = 0\n[B(x), B(y)] = B(x)\n").unwrap();
    let out = dir.path().join("out");
    let run = swnlab(&["wick", "--corpus", corpus.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));
    let r = reports(&out.join("wick.json"));
    assert_eq!(r.len(), 2);
    assert_eq!(r.iter().filter(|x| x["pass"] == true).count(), 1);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "betas = 1\nbogus = 3\n").unwrap();
    let run = swnlab(&["moments", "--config", cfg.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("bogus"));

    let run = swnlab(&["moments", "--kmax", "12"]);
    assert_eq!(run.status.code(), Some(2));
    let run = swnlab(&["moments", "--format", "xml"]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn moments_command_writes_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m");
    let run = swnlab(&["moments", "--beta", "0,2", "--kmax", "4", "--format", "both", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let r = reports(&out.join("moments.json"));
    assert!(!r.is_empty());
    for rep in &r {
        assert_eq!(rep["schema_version"], 1);
        assert_eq!(rep["pass"], true);
        assert!(rep["params"]["order"].as_u64().unwrap() <= 4);
    }
    let csv = std::fs::read_to_string(out.join("moments.csv")).unwrap();
    assert_eq!(csv.lines().count(), r.len() + 1);
}

#[test]
fn distributions_write_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d");
    let run = swnlab(&["distributions", "--beta", "1,2,3", "--marginal", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    for beta in ["1", "2", "3"] {
        assert!(out.join(format!("levy_beta{beta}.csv")).exists());
        assert!(out.join(format!("marginal_beta{beta}_area1.csv")).exists());
    }
}

#[test]
fn failing_tolerance_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p");
    let run = swnlab(&["proofchain", "--beta", "1", "--tol", "1e-300", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&run.stderr).contains("FAIL"));
}

#[test]
fn config_file_round_trip() {
    let cfg = RunConfig::parse("betas = 0, 3\nkmax = 5\nformat = csv\ntol_moments = 1e-9\ngrids = 2:0.5\n").unwrap();
    assert_eq!(cfg.betas, vec![0.0, 3.0]);
    assert_eq!(cfg.k_max, 5);
    assert_eq!(cfg.format, Format::Csv);
    assert_eq!(cfg.tolerances.moments, 1e-9);
    assert_eq!(cfg.grids.len(), 1);
    assert!(RunConfig::parse("kmax = 3\nkmax = 4\n").is_err());
}
