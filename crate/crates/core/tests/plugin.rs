use std::io::Write;
use std::process::{Command, Stdio};

use lattice_repr::lazylf::plugin::{write_oracle_table, OpaqueElem, PluginLattice};
use lattice_repr::lazylf::{interval, BFin, Covering, LocallyFiniteLattice, ZGrid};
use lattice_repr::transpose::{build_chain, classify_prime};
use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_latrep");

fn served(name: &str) -> PluginLattice {
    PluginLattice::spawn(BIN, &["serve".into(), name.into()]).unwrap()
}

fn e(v: Value) -> OpaqueElem {
    OpaqueElem::new(v)
}

#[test]
fn served_grid_answers_like_the_builtin() {
    let p = served("zgrid2");
    let z = ZGrid::new(2);
    let (x, y) = (vec![0i64, 3], vec![2i64, -1]);
    assert_eq!(p.meet(&e(json!(x)), &e(json!(y))), e(json!(z.meet(&x, &y))));
    assert_eq!(p.join(&e(json!(x)), &e(json!(y))), e(json!(z.join(&x, &y))));
    assert!(!p.leq(&e(json!(x)), &e(json!(y))));
    assert_eq!(p.upper_covers(&e(json!([0, 0]))).unwrap(), vec![e(json!([0, 1])), e(json!([1, 0]))]);

    let wp = interval(&p, &e(json!([0, 0])), &e(json!([2, 2])), 4096).unwrap();
    let wz = interval(&z, &vec![0, 0], &vec![2, 2], 4096).unwrap();
    assert_eq!(wp.len(), wz.len());
    assert_eq!(wp.lattice().poset().covers().len(), wz.lattice().poset().covers().len());
}

#[test]
fn served_chains_match_the_builtin() {
    let p = served("zgrid2");
    let z = ZGrid::new(2);
    let c = Covering { lower: vec![0i64, 0], upper: vec![1, 0] };
    let pc = Covering { lower: e(json!([0, 0])), upper: e(json!([1, 0])) };
    let (zc, _) = build_chain(&z, &c, 6).unwrap();
    let (pch, _) = build_chain(&p, &pc, 6).unwrap();
    let a: Vec<Value> = zc.coverings.iter().map(|c| json!([c.lower, c.upper])).collect();
    let b: Vec<Value> = pch.coverings.iter().map(|c| json!([c.lower, c.upper])).collect();
    assert_eq!(a, b);
    assert!(!classify_prime(&p, &pc, 6).unwrap().is_principal());
}

#[test]
fn infinite_cover_lists_still_give_windows() {
    let p = served("bfin");
    assert_eq!(p.upper_covers(&e(json!([]))), None);
    let w = interval(&p, &e(json!([])), &e(json!([1, 2, 3])), 4096).unwrap();
    let b = interval(&BFin, &Default::default(), &[1u64, 2, 3].into_iter().collect(), 4096).unwrap();
    assert_eq!(w.len(), b.len());
    let c = Covering { lower: e(json!([1])), upper: e(json!([1, 3])) };
    assert!(classify_prime(&p, &c, 32).unwrap().is_principal());
}

#[test]
fn malformed_requests_get_error_lines() {
    let mut child = Command::new(BIN)
        .args(["serve", "zgrid2"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    writeln!(stdin, "not json").unwrap();
    writeln!(stdin, r#"{{"op": "frob", "args": []}}"#).unwrap();
    writeln!(stdin, r#"{{"op": "leq", "args": [[0, 0], [1, 1]]}}"#).unwrap();
    drop(stdin);
    let out = child.wait_with_output().unwrap();
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].get("error").is_some());
    assert!(lines[1].get("error").is_some());
    assert_eq!(lines[2], json!({"result": true}));
}

#[test]
fn static_tables_and_the_cli_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.jsonl");
    let z = ZGrid::new(2);
    let elems: Vec<Vec<i64>> = (0..3).flat_map(|i| (0..3).map(move |j| vec![i, j])).collect();
    write_oracle_table(&z, &elems, std::fs::File::create(&path).unwrap()).unwrap();

    let t = PluginLattice::from_table(&path).unwrap();
    assert_eq!(interval(&t, &e(json!([0, 0])), &e(json!([2, 2])), 4096).unwrap().len(), 9);

    let run = |plugin: &str| {
        let out = Command::new(BIN)
            .args(["window", "--plugin", plugin, "[0,0]", "[2,2]"])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v["size"].clone()
    };
    assert_eq!(run(path.to_str().unwrap()), 9);
    assert_eq!(run(&format!("{BIN} serve zgrid2")), 9);
}
