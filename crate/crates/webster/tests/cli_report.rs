mod common;

use std::process::Command;
use webster::parse::{parse_algebra, parse_element, ParsedElement};
use webster::suites::{run, ConfigError, RunConfig, Status, SUITES};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_webster"))
}

fn config(n: usize, p: u64, window: u32, checks: &[&str]) -> RunConfig {
    RunConfig { n, p, window, seed: 11, checks: checks.iter().map(|s| s.to_string()).collect(), corpus_size: 50 }
}

#[test]
fn config_validation() {
    assert_eq!(config(2, 4, 8, &[]).validate(), Err(ConfigError::BadP(4)));
    assert_eq!(config(2, 2, 8, &[]).validate(), Err(ConfigError::BadP(2)));
    assert_eq!(config(1, 3, 8, &[]).validate(), Err(ConfigError::BadN(1)));
    assert_eq!(config(2, 3, 3, &[]).validate(), Err(ConfigError::BadWindow(3)));
    assert!(matches!(config(2, 3, 8, &["nope"]).validate(), Err(ConfigError::UnknownCheck(_))));
    assert!(config(2, 3, 4, &SUITES).validate().is_ok());
}

#[test]
fn exit_codes() {
    let out = bin().args(["--p", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prime"));
    assert_eq!(bin().args(["--D", "2"]).output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["--bogus"]).output().unwrap().status.code(), Some(2));
    let ok = bin().args(["--n", "2", "--p", "3", "--D", "8", "--check", "relations"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("PASS relations"));
}

#[test]
fn json_report_is_deterministic() {
    let dir = std::env::temp_dir();
    let paths: Vec<_> = (0..2).map(|k| dir.join(format!("webster_report_{}_{k}.json", std::process::id()))).collect();
    for p in &paths {
        let st = bin()
            .args(["--n", "2", "--p", "5", "--D", "4", "--seed", "3", "--corpus-size", "20", "--check", "differential,bb,braid", "--json"])
            .arg(p)
            .output()
            .unwrap();
        assert!(st.status.success());
    }
    let a = std::fs::read(&paths[0]).unwrap();
    let b = std::fs::read(&paths[1]).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["checks"], serde_json::json!(["differential", "bb", "braid"]));
    assert!(v.get("timings").is_none());
    for p in paths {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn braid_report_shape() {
    let r = run(&config(3, 3, 6, &["braid"]), true).unwrap();
    assert!(r.pass);
    assert!(r.timings.as_ref().unwrap().contains_key("braid"));
    let d = &r.results[0].details;
    let rels: Vec<&str> = d.as_array().unwrap().iter().map(|x| x["relation"].as_str().unwrap()).collect();
    assert!(rels.iter().any(|s| s.contains("Sigma1 Sigma2 Sigma1")), "{rels:?}");
    for x in d.as_array().unwrap() {
        assert!(x["lhs_terms"].is_object() && x["certificate"].is_array());
    }
}

#[test]
fn skipped_suites_do_not_fail() {
    let r = run(&config(2, 3, 4, &["ses"]), false).unwrap();
    assert_eq!(r.results[0].status, Status::Skipped);
    assert!(r.pass);
}

#[test]
fn element_grammar() {
    let c = common::ctx(2, 3);
    let a = c.algebra().clone();
    match parse_element("e1", &c).unwrap() {
        ParsedElement::Algebra(x) => assert_eq!(x, a.e(1)),
        _ => panic!("expected an algebra element"),
    }
    let r = parse_algebra("psi2*psi2*e1", &a).unwrap();
    assert_eq!(r.terms().len(), 2);
    let e = parse_algebra("x1^(-1)", &a).unwrap_err();
    assert!(e.to_string().contains("position"));
    let v = parse_algebra("2*x1*psi2*e1 - y^2*e0 + psi1*psi2*e2", &a).unwrap();
    assert_eq!(parse_algebra(&v.format(), &a).unwrap(), v);
    let out = bin().args(["--element", "psi2*psi2*e1"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r.format());
}
