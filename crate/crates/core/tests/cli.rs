mod common;

use knotpoly::braidrep::component_count;
use knotpoly::cli::catalog::load_catalog;
use knotpoly::cli::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use knotpoly::laurent::MultiLaurent;
use knotpoly::laurent::PolyJson;
use knotpoly::rmatrices::alexander_ctx;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut all = vec!["knotpoly"];
    all.extend_from_slice(args);
    let code = run(all, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn catalog_is_valid() {
    let cat = load_catalog().unwrap();
    let ctx = alexander_ctx();
    let mut oracle = common::ConwayOracle::new();
    for e in &cat {
        assert_eq!(component_count(&e.braid), e.expected_components, "{}", e.name);
        assert!(e.braid.strands <= 3 && e.braid.letters.len() <= 6, "{}", e.name);
        if e.expected_components == 1 {
            let (code, out, _) = call(&["compute", "--invariant", "alexander", "--link", &e.name]);
            assert_eq!(code, EXIT_OK);
            let want = oracle.alexander(&ctx, e.braid.strands, &e.braid.letters);
            assert_eq!(MultiLaurent::parse(&ctx, out.trim()).unwrap(), want, "{}", e.name);
        }
    }
    for name in ["unknot", "unlink-2", "hopf", "trefoil", "figure-eight", "trefoil#trefoil", "torus-2-6", "chain-3"] {
        assert!(cat.iter().any(|e| e.name == name), "{name}");
    }
}

#[test]
fn figure_eight_matches_oracle() {
    let (code, out, _) = call(&["compute", "--invariant", "alexander", "--braid", "strands=3; 1 -2 1 -2"]);
    assert_eq!(code, EXIT_OK);
    let ctx = alexander_ctx();
    assert_eq!(MultiLaurent::parse(&ctx, out.trim()).unwrap(), common::oracle_alexander(&ctx, 3, &[1, -2, 1, -2]));
}

#[test]
fn compute_outputs() {
    let (code, out, _) = call(&["compute", "--invariant", "alexander", "--braid", "strands=2; 1 1 1"]);
    assert_eq!(code, EXIT_OK);
    let ctx = alexander_ctx();
    assert_eq!(MultiLaurent::parse(&ctx, out.trim()).unwrap(), common::oracle_alexander(&ctx, 2, &[1, 1, 1]));
    assert_eq!(call(&["compute", "--invariant", "lambda1", "--braid", "strands=1;"]).1.trim(), "1");
    let (code, out, _) = call(&["compute", "--invariant", "sl3", "--braid", "strands=2; 1 1", "--json"]);
    assert_eq!(code, EXIT_OK);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["components"], 2);
    let value: PolyJson = serde_json::from_value(j["value"].clone()).unwrap();
    let sl3 = MultiLaurent::from_json(&value).unwrap();
    let lam = call(&["compute", "--invariant", "lambda-1", "--braid", "strands=2; 1 1", "--json"]).1;
    let lam: serde_json::Value = serde_json::from_str(&lam).unwrap();
    let lam = MultiLaurent::from_json(&serde_json::from_value(lam["value"].clone()).unwrap()).unwrap();
    let moved = knotpoly::invariants::substitute_lambda_minus1(&lam, knotpoly::invariants::Lam1Substitution::Matched);
    assert_eq!(moved, sl3);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(call(&["compute", "--invariant", "nope", "--braid", "strands=1;"]).0, EXIT_USAGE);
    assert_eq!(call(&["compute", "--invariant", "alexander", "--braid", "strands=2; 5"]).0, EXIT_USAGE);
    assert_eq!(call(&["compute", "--invariant", "alexander", "--link", "nope"]).0, EXIT_USAGE);
    assert_eq!(call(&["verify", "nope"]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["show-matrix", "nope"]).0, EXIT_USAGE);
    assert_eq!(call(&["verify", "axioms", "--matrix-file", "/nonexistent.json"]).0, EXIT_USAGE);
}

#[test]
fn verify_reports_are_deterministic() {
    let a = call(&["verify", "skein", "--json", "--seed", "5", "--samples", "8"]);
    let b = call(&["verify", "skein", "--json", "--seed", "5", "--samples", "8"]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a.1, b.1);
    let j: serde_json::Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(j["failed"], 0);
    assert_eq!(j["checks"].as_array().unwrap().len(), 9);
    let c = call(&["verify", "skein", "--json", "--seed", "6", "--samples", "8"]);
    assert_ne!(a.1, c.1);
}

#[test]
fn text_and_json_reports_agree() {
    let (_, text, _) = call(&["verify", "theorem2", "--link", "hopf"]);
    let (_, json, _) = call(&["verify", "theorem2", "--link", "hopf", "--json"]);
    let j: serde_json::Value = serde_json::from_str(&json).unwrap();
    for c in j["checks"].as_array().unwrap() {
        let line = format!("{} {}", if c["pass"].as_bool().unwrap() { "PASS" } else { "FAIL" }, c["id"].as_str().unwrap());
        assert!(text.lines().any(|l| l.starts_with(&line)), "{line}");
    }
}

#[test]
fn failed_checks_exit_1() {
    let (code, out, _) = call(&["verify", "theorem2", "--link", "hopf"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("FAIL hopf/Lambda1-integral"));
    assert!(out.contains("PASS hopf/La1"));
    assert_eq!(call(&["verify", "theorem2", "--link", "trefoil"]).0, EXIT_OK);
}

#[test]
fn matrix_file_round_trip() {
    let dir = std::env::temp_dir();
    for (name, want) in [("lambda1", EXIT_OK), ("sl3-printed", EXIT_FAILED)] {
        let (code, out, _) = call(&["show-matrix", name, "--json"]);
        assert_eq!(code, EXIT_OK);
        let path = dir.join(format!("knotpoly-cli-test-{name}.json"));
        std::fs::write(&path, out).unwrap();
        assert_eq!(call(&["verify", "axioms", "--matrix-file", path.to_str().unwrap()]).0, want, "{name}");
        std::fs::remove_file(path).unwrap();
    }
}

#[test]
fn list_and_show() {
    let (code, out, _) = call(&["list"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("figure-eight"));
    let (code, out, _) = call(&["show-matrix", "alexander"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("t^(1/2)"));
}
