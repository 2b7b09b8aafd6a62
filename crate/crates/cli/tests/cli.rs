use gentle_core::prelude::*;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.gentle"));
    p.to_str().unwrap().to_string()
}

fn gentle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gentle")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = gentle(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    serde_json::from_slice(&o.stdout).expect("a single JSON document")
}

fn keys(v: &Value) -> Vec<&str> {
    let mut k: Vec<&str> = v.as_object().unwrap().keys().map(|s| s.as_str()).collect();
    k.sort();
    k
}

#[test]
fn validate_reports_the_dimension() {
    let o = gentle(&["validate", &fixture("dual_numbers")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dim A = 2"), "{}", stdout(&o));
    let v = json(&["validate", &fixture("dual_numbers"), "--json"]);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["path_basis"], serde_json::json!(["e1", "x"]));
}

#[test]
fn missing_file_is_a_domain_error() {
    let o = gentle(&["cycles", "missing.gentle"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("file not found"));
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_input_is_a_domain_error() {
    let dir = std::env::temp_dir().join(format!("gentle-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("loop", "vertex 1\narrow x : 1 -> 1\n"),
        ("branching", "vertex 1 2 3 4\narrow a : 1 -> 2\narrow b : 1 -> 3\narrow c : 1 -> 4\n"),
        ("syntax", "vertex 1\narrow x 1 -> 1\n"),
    ];
    for (name, text) in cases {
        let path = dir.join(format!("{name}.gentle"));
        std::fs::write(&path, text).unwrap();
        let o = gentle(&["validate", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1), "{name}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    std::fs::remove_dir_all(&dir).unwrap();
    let o = gentle(&["hom", &fixture("pent"), "--from", "a, b", "--to", "a"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invalid word"));
}

#[test]
fn usage_errors_exit_with_two() {
    let pent = fixture("pent");
    for args in [
        vec!["frobnicate"],
        vec!["hom", pent.as_str(), "--from", "a"],
        vec!["hom", pent.as_str(), "--from", "a@x", "--to", "a"],
        vec!["band", pent.as_str(), "--band", "d^-1, e^-1, f^-1, c, b, a", "--scalar", "1/0"],
        vec!["search", pent.as_str(), "--shift-window", "-1"],
        vec![],
    ] {
        let o = gentle(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(gentle(&["--help"]).status.code(), Some(0));
}

#[test]
fn pent_orbit_json() {
    let v = json(&["ag", &fixture("pent"), "--json"]);
    let text = serde_json::to_string(&v).unwrap();
    assert!(text.starts_with(r#"{"orbits":[{"n":4,"m":0,"#), "{text}");
    assert_eq!(v["orbits"].as_array().unwrap().len(), 1);
    assert_eq!(v["orbits"][0]["members"].as_array().unwrap().len(), 4);
}

#[test]
fn orbit_graph_in_dot() {
    let o = gentle(&["ag", &fixture("kronecker"), "--dot"]);
    let out = stdout(&o);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("->").count(), 2);
    assert_eq!(out.matches("subgraph").count(), 2);
}

#[test]
fn cycle_schema() {
    for name in ["pent", "a3_relation", "kronecker", "dual_numbers"] {
        let v = json(&["cycles", &fixture(name), "--verify", "--json"]);
        assert_eq!(v["verified"], true);
        for c in v["cycles"].as_array().unwrap() {
            assert_eq!(keys(c), ["calabi_yau", "certificate", "entries", "n", "shifts"]);
            let n = c["n"].as_u64().unwrap() as usize;
            assert_eq!(c["entries"].as_array().unwrap().len(), n);
            assert_eq!(c["shifts"].as_array().unwrap().len(), n);
            assert_eq!(keys(&c["certificate"]), ["E1", "E2", "E3"]);
            for e in c["entries"].as_array().unwrap() {
                assert_eq!(keys(e), ["shift", "word"]);
            }
            assert!(c["calabi_yau"].is_null() || c["calabi_yau"].is_i64());
        }
    }
}

#[test]
fn cycle_entries_round_trip() {
    let alg = load(&std::fs::read_to_string(fixture("a3_relation")).unwrap()).unwrap();
    let v = json(&["cycles", &fixture("a3_relation"), "--json"]);
    for c in v["cycles"].as_array().unwrap() {
        for e in c["entries"].as_array().unwrap() {
            let expr = e["word"].as_str().unwrap();
            let Word::String(w) = parse_word(&alg, expr).unwrap() else { panic!("band entry") };
            assert_eq!(w.expr(&alg), expr);
            let at = format!("{expr}@{}", e["shift"]);
            let h = json(&["hom", &fixture("a3_relation"), "--from", &at, "--to", &at, "--json"]);
            assert_eq!(h["hom"], 1, "End({at})");
            assert_eq!(h["from"]["shift"], e["shift"]);
        }
    }
}

#[test]
fn thread_schema() {
    let v = json(&["threads", &fixture("pent"), "--json"]);
    assert_eq!(keys(&v), ["aag_cycles", "critical", "forbidden", "permitted", "phi1", "phi2"]);
    assert_eq!(v["critical"].as_array().unwrap().len(), 6);
    assert_eq!(v["permitted"].as_array().unwrap().len(), 4);
    assert_eq!(v["aag_cycles"], serde_json::json!([{ "n": 4, "m": 0, "threads": ["b", "dc", "e", "af"] }]));
    assert_eq!(v["phi1"]["b"], "1_2");
    assert_eq!(v["phi2"]["cba"], Value::Null);
}

#[test]
fn complex_schema_and_profile() {
    let v = json(&["hom", &fixture("kronecker"), "--from", "a", "--to", "a@1", "--profile", "--json"]);
    let c = &v["from"]["complex"];
    assert_eq!(keys(c), ["diff", "terms"]);
    assert_eq!(c["terms"]["-1"], serde_json::json!([0, 1]));
    assert_eq!(c["terms"]["0"], serde_json::json!([1, 2]));
    assert_eq!(c["diff"]["-1"].as_array().unwrap().len(), 2);
    // a regular module at the mouth of its tube: End = k and Ext^1 = k
    assert_eq!(v["profile"], serde_json::json!({ "-1": 1, "0": 1 }));
    assert_eq!(v["hom"], v["profile"]["0"]);
}

#[test]
fn band_verdicts() {
    let v = json(&["band", &fixture("kronecker"), "--band", "b^-1, a", "--scalar", "-3", "--json"]);
    assert_eq!(v["spherical"], true);
    assert_eq!(v["profile"], serde_json::json!({ "0": 1, "1": 1 }));
    let v = json(&["band", &fixture("pent"), "--band", "d^-1, e^-1, f^-1, c, b, a", "--scalar", "1", "--json"]);
    assert_eq!(v["spherical"], false);
    assert!(v["profile"]["3"].as_u64().unwrap() >= 1);
}

#[test]
fn alp_lists_the_basis_by_kind() {
    let v = json(&["alp", &fixture("kronecker"), "--from", "a", "--to", "a", "--json"]);
    assert_eq!(keys(&v["basis"]), ["double", "graph", "single"]);
    assert_eq!(v["basis"]["graph"].as_array().unwrap().len(), 1);
    assert_eq!(v["chain_maps"], 1);
    let o = gentle(&["alp", &fixture("kronecker"), "--from", "band: b^-1, a", "--to", "a"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn search_on_the_a3_relation_algebra() {
    let v = json(&["search", &fixture("a3_relation"), "--json"]);
    let mut lens: Vec<u64> = v["cycles"].as_array().unwrap().iter().map(|c| c["n"].as_u64().unwrap()).collect();
    lens.sort();
    assert_eq!(lens, [2, 4]);
    let v = json(&["search", &fixture("a3_relation"), "--max-letters", "1", "--shift-window", "1", "--json"]);
    assert_eq!(v["max_letters"], 1);
    assert_eq!(v["shift_window"], 1);
}

#[test]
fn reruns_are_byte_identical() {
    let pent = fixture("pent");
    let a3 = fixture("a3_relation");
    let commands: Vec<Vec<&str>> = vec![
        vec!["validate", &pent],
        vec!["threads", &pent],
        vec!["ag", &pent],
        vec!["ag", &pent, "--dot"],
        vec!["hom", &pent, "--from", "triv:1:-1", "--to", "triv:3:-1@1", "--profile"],
        vec!["alp", &a3, "--from", "a", "--to", "b@-1"],
        vec!["cycles", &pent, "--verify"],
        vec!["band", &pent, "--band", "d^-1, e^-1, f^-1, c, b, a", "--scalar", "2/3"],
        vec!["search", &a3],
    ];
    for args in commands {
        for extra in [&[][..], &["--json"][..]] {
            let base: Vec<&str> = args.iter().copied().chain(extra.iter().copied()).collect();
            let first = gentle(&base);
            assert_eq!(first.status.code(), Some(0), "{base:?}: {}", stderr(&first));
            let again = gentle(&base);
            let par: Vec<&str> = base.iter().copied().chain(["--parallel"]).collect();
            let parallel = gentle(&par);
            assert_eq!(first.stdout, again.stdout, "{base:?}");
            assert_eq!(first.stdout, parallel.stdout, "{base:?} with --parallel");
        }
    }
}

#[test]
fn selftest_passes() {
    let o = gentle(&["selftest", "--seed", "7", "--count", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert_eq!(stdout(&o).matches("PASS").count(), 7);
    let v = json(&["selftest", "--seed", "7", "--count", "4", "--json"]);
    assert_eq!(v["seed"], 7);
    assert!(v["suites"].as_array().unwrap().iter().all(|s| s["passed"] == true));
}
