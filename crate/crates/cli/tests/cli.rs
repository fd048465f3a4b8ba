//! End-to-end runs of the `slp` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn slp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slp")).args(args).output().expect("spawn slp")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn roots_schema() {
    let out = slp(&["roots", "--type", "B3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["type"], "B3");
    assert_eq!(v["field"], "Q");
    assert_eq!(v["simple"].as_array().unwrap().len(), 3);
    assert_eq!(v["positive"].as_array().unwrap().len(), 9);
    assert_eq!(v["gram"].as_array().unwrap().len(), 3);
    assert_eq!(v["simple"][0][0]["field"], "Q");

    let h = json(&slp(&["roots", "--type", "H3"]));
    assert_eq!(h["field"], "Q(sqrt5)");
    assert_eq!(h["positive"].as_array().unwrap().len(), 15);
}

#[test]
fn e8_dot_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("e8.dot");
    let out = slp(&["quotient", "--type", "E8", "--dot", path_str(&dot)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = json(&out);
    assert_eq!(s["nodes"], 240);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
    let ranks: Vec<&str> = text.lines().filter(|l| l.contains("rank=same")).collect();
    assert_eq!(ranks.len(), 58);
    let nodes: usize = ranks
        .iter()
        .map(|l| l.split(|c: char| c == ' ' || c == ';').filter(|w| w.starts_with('n') && w[1..].parse::<u32>().is_ok()).count())
        .sum();
    assert_eq!(nodes, 240);
    assert_eq!(text.matches("->").count(), s["edges"].as_u64().unwrap() as usize);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert!(slp(&["quotient", "--type", "F4", "--json", path_str(p)]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let x = slp(&["paths", "--type", "F4", "--degree", "5", "--vertex-disjoint", "--list"]);
    let y = slp(&["paths", "--type", "F4", "--degree", "5", "--vertex-disjoint", "--list"]);
    assert!(x.status.success());
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn lefschetz_on_poset_file() {
    let dir = tempfile::tempdir().unwrap();
    let poset = dir.path().join("b3.json");
    assert!(slp(&["quotient", "--type", "B3", "--json", path_str(&poset)]).status.success());

    let strong = slp(&["lefschetz", "--poset", path_str(&poset)]);
    assert!(strong.status.success());

    let tsv = slp(&["lefschetz", "--poset", path_str(&poset), "--degree", "1", "--format", "tsv"]);
    assert!(tsv.status.success());
    let text = String::from_utf8(tsv.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let rows: Vec<&str> = lines.collect();
    assert!(header.len() >= 2);
    assert_eq!(rows.len(), header.len() - 1, "square matrix with labelled rows");
    assert!(rows.iter().all(|r| r.split('\t').count() == header.len()));

    let missing = slp(&["lefschetz", "--poset", path_str(&poset), "--format", "tsv"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn deform_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("deform.json");
    let out = slp(&["deform", "--type", "B2", "--report", path_str(&rep)]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    for k in ["type", "theta", "theta_type", "hypotheses", "Dk", "t0", "final_check"] {
        assert!(v.get(k).is_some(), "missing key {k}");
    }
    assert_eq!(v["final_check"], "pass");
    assert!(v["hypotheses"].as_array().unwrap().iter().all(|h| h["pass"] == true));
    assert!(v["t0"].as_u64().unwrap() >= 1);
}

#[test]
fn unsupported_deform_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("h3.json");
    let out = slp(&["deform", "--type", "H3", "--report", path_str(&rep)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("quotient poset"));
    assert!(!rep.exists());
}

#[test]
fn exit_codes() {
    assert_eq!(slp(&["roots", "--type", "Z9"]).status.code(), Some(1));
    assert_eq!(slp(&["quotient"]).status.code(), Some(1));
    assert_eq!(slp(&["--help"]).status.code(), Some(0));
    assert_eq!(slp(&["tables"]).status.code(), Some(1));
    assert_eq!(slp(&["verify-theorem", "--max-rank", "9"]).status.code(), Some(1));

    // a non-regular element fails the check in degree 0
    let bad = slp(&["coinvariant", "--type", "A2", "--element", "1,-1", "--check-strong"]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(json(&bad)["strong"], false);

    let good = slp(&["coinvariant", "--type", "A3", "--check-strong"]);
    assert_eq!(good.status.code(), Some(0));
    assert_eq!(json(&good)["dims"], serde_json::json!([1, 3, 5, 6, 5, 3, 1]));
}

#[test]
fn verify_theorem_small_rank() {
    let out = slp(&["verify-theorem", "--max-rank", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["scope"].as_str().unwrap().contains("does not compute the full coinvariant ring"));
    let types: Vec<&str> = v["steps"].as_array().unwrap().iter().map(|s| s["type"].as_str().unwrap()).collect();
    assert!(types.contains(&"A2") && types.contains(&"B2") && types.contains(&"I2(5)"));
}

#[test]
fn tables_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = slp(&["tables", "--paper", "--out", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let m: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["failures"], 0);
    assert_eq!(m["pass"], true);
    let mut deviating = Vec::new();
    for item in m["items"].as_array().unwrap() {
        for c in item["checks"].as_array().unwrap() {
            if c["status"] == "deviation" {
                deviating.push(format!("{}: {}", item["name"].as_str().unwrap(), c["name"].as_str().unwrap()));
            }
        }
    }
    assert_eq!(
        deviating,
        [
            "f4_b3: path systems V^0 -> V^15",
            "f4_b3: path systems V^1 -> V^14",
            "f4_b3: path systems V^2 -> V^13",
            "f4_b3: path systems V^3 -> V^12",
            "h4_layers: layer 15 matchings",
        ]
    );
    assert_eq!(m["deviations"], 5);
}
