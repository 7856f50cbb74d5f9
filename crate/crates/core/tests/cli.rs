use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_latrep");

fn latrep(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("run latrep")
}

fn json(args: &[&str]) -> Value {
    let out = latrep(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

const SMALL: [&str; 8] = ["--instances", "20", "--lattice-instances", "10", "--cases", "10", "--max-poset", "4"];

#[test]
fn verify_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let path = dir.path().join(name);
        let mut args = vec!["verify", "--seed", seed, "--json", path.to_str().unwrap()];
        args.extend(SMALL);
        let out = latrep(&args);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(path).unwrap()
    };
    let a = run("a.json", "11");
    assert_eq!(a, run("b.json", "11"));
    assert_ne!(a, run("c.json", "12"));
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["totalFailures"], 0);
}

#[test]
fn injected_fault_exits_one_and_names_the_property() {
    let mut args = vec!["verify", "--inject-fault"];
    args.extend(SMALL);
    let out = latrep(&args);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("FAILED birkhoff-isomorphism"), "{stderr}");
}

#[test]
fn usage_and_input_errors_exit_two() {
    for args in [
        &["classify", "nope", "1<2"][..],
        &["classify", "zgrid2", "(0,0)<(2,0)"],
        &["classify", "(0,0)<(1,0)"],
        &["window", "div12", "2", "3", "--limit", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(latrep(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn classify_builtins() {
    let v = json(&["classify", "zgrid2", "(0,0)<(1,0)", "--budget", "5"]);
    assert_eq!(v["verdict"], "budget_exceeded");
    assert_eq!(v["oracleKind"], "secondary");
    assert_eq!(v["chain"].as_array().unwrap().len(), 5);

    let v = json(&["classify", "ngrid2", "(2,1)<(3,1)"]);
    assert_eq!(v["verdict"], "principal");
    assert_eq!(v["generator"], serde_json::json!([3, 0]));

    let v = json(&["classify", "bfin", "{1}<{1,3}"]);
    assert_eq!(v["verdict"], "principal");
    assert_eq!(v["generator"], serde_json::json!([3]));

    let v = json(&["classify", "div12", "1<2"]);
    assert_eq!(v["verdict"], "principal");
    assert_eq!(v["labels"][v["generator"].as_u64().unwrap() as usize], "2");
}

#[test]
fn window_sizes() {
    assert_eq!(json(&["window", "zgrid2", "(0,0)", "(2,3)"])["size"], 12);
    assert_eq!(json(&["window", "bfin", "[]", "[1,2,3]"])["size"], 8);
}

#[test]
fn components_match_golden_files() {
    for (name, file) in [("zgrid2", "zgrid2_components.json"), ("bfin", "bfin_components.json")] {
        let out = latrep(&["components", name]);
        assert!(out.status.success());
        assert_eq!(String::from_utf8(out.stdout).unwrap(), golden(file), "{name}");
    }
}

#[test]
fn gen_then_birkhoff_and_components() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let path = path.to_str().unwrap();
    let out = latrep(&["gen", "poset", "--seed", "5", "--max-poset", "6", "--json", path]);
    assert!(out.status.success());
    let p: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let n = p["n"].as_u64().unwrap();
    assert!((1..=6).contains(&n));

    let b = json(&["birkhoff", path]);
    assert_eq!(b["holds"], true);
    assert_eq!(b["joinIrreducibles"], n);
    assert_eq!(b["latticeSize"], b["ideals"]);

    let c = json(&["components", path]);
    assert_eq!(c["classes"].as_array().unwrap().len(), 1);
}

#[test]
fn gen_lattice_is_distributive() {
    let v = json(&["gen", "lattice", "--seed", "2"]);
    let n = v["n"].as_u64().unwrap();
    assert!((1..=16).contains(&n), "{n}");
}

#[test]
fn dot_outputs() {
    let dot = |args: &[&str]| {
        let out = latrep(args);
        assert!(out.status.success(), "{args:?}");
        String::from_utf8(out.stdout).unwrap()
    };
    let d = dot(&["dot", "lattice", "chain3"]);
    assert!(d.starts_with("digraph"));
    assert_eq!(d.matches(" -> ").count(), 2);

    let d = dot(&["dot", "prime-poset", "div12"]);
    assert_eq!(d.matches("PF(").count(), 3);
    assert_eq!(d.matches(" -> ").count(), 1);

    let d = dot(&["dot", "filter-lattice", "bool2"]);
    assert_eq!(d.matches(" -> ").count(), 4);

    let d = dot(&["dot", "ideal-graph", "chain2"]);
    assert!(d.starts_with("graph"));

    assert_eq!(latrep(&["dot", "lattice", "bool12", "--limit", "100"]).status.code(), Some(2));
}
