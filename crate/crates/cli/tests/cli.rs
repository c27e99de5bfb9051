use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn groupwl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groupwl")).args(args).output().expect("spawn groupwl")
}

fn report(args: &[&str]) -> Value {
    let out = groupwl(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON report")
}

fn write_k4(dir: &Path) -> String {
    let p = dir.join("k4.txt");
    std::fs::write(&p, "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn cfi_build_then_wl() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write_k4(dir.path());
    let even = dir.path().join("even.txt");
    let odd = dir.path().join("odd.txt");
    let (even, odd) = (even.to_str().unwrap(), odd.to_str().unwrap());

    let r = report(&["cfi", "build", &k4, "-o", even]);
    assert_eq!(r["result"]["vertices"], 40);
    assert_eq!(r["result"]["edges"], 60);
    assert!(Path::new(&format!("{even}.meta.json")).exists());
    report(&["cfi", "build", &k4, "--twist", "0-1", "-o", odd]);

    let text = std::fs::read_to_string(even).unwrap();
    let g = groupwl_core::graphs::parse_graph(&text).unwrap();
    assert_eq!(g.vertex_count(), 40);

    let one = report(&["wl", "graph", even, odd, "-k", "1"]);
    assert_eq!(one["result"]["verdict"]["distinguished"], false);
    let three = report(&["wl", "graph", even, odd, "-k", "3"]);
    assert_eq!(three["result"]["verdict"]["distinguished"], true);
    assert_eq!(three["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(three["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write_k4(dir.path());
    let a = groupwl(&["--seed", "7", "check", "lemmas", &k4]);
    let b = groupwl(&["--seed", "7", "--threads", "1", "check", "lemmas", &k4]);
    assert!(a.status.success());
    let (mut a, mut b): (Value, Value) = (serde_json::from_slice(&a.stdout).unwrap(), serde_json::from_slice(&b.stdout).unwrap());
    assert_eq!(a["result"]["ok"], true);
    // Only the echoed argv differs.
    a["command"] = Value::Null;
    b["command"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn group_commands() {
    let r = report(&["group", "invariants", "Q8"]);
    assert_eq!(r["result"]["order"], 8);
    assert_eq!(r["result"]["center_size"], 2);
    assert_eq!(report(&["group", "iso", "Z2xZ3", "Z6"])["result"]["isomorphic"], true);
    assert_eq!(report(&["group", "iso", "Z4", "Z2xZ2"])["result"]["isomorphic"], false);

    let wl = report(&["wl", "group", "Z4", "Z2xZ2", "-k", "2", "--version", "I"]);
    assert_eq!(wl["result"]["verdict"]["distinguished"], true);
    let game = report(&["game", "solve", "Z4", "Z2xZ2", "--pebbles", "2"]);
    assert_eq!(game["result"]["winner"], "spoiler");
    let game = report(&["game", "solve", "D8", "D8", "--pebbles", "2"]);
    assert_eq!(game["result"]["winner"], "duplicator");
}

#[test]
fn group_table_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("d8.txt");
    let table = table.to_str().unwrap();
    report(&["group", "table", "D8", "-o", table]);
    assert_eq!(report(&["group", "iso", table, "D8"])["result"]["isomorphic"], true);
    assert_eq!(report(&["group", "iso", table, "Q8"])["result"]["isomorphic"], false);
}

#[test]
fn mekler_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.txt");
    std::fs::write(&path, "3 2\n0 1\n1 2\n").unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, format!(r#"{{"graph": {:?}, "p": 3}}"#, path.to_str().unwrap())).unwrap();
    let path = path.to_str().unwrap();

    let b = report(&["mekler", "build", path, "-p", "3"]);
    assert_eq!(b["result"]["log_order"], 4);
    assert_eq!(b["result"]["m"], 1);
    let from_spec = report(&["mekler", "build", spec.to_str().unwrap()]);
    assert_eq!(from_spec["result"], b["result"]);

    // Non-adjacent generators commute only up to their commutator.
    let xy = report(&["mekler", "mul", path, "-p", "3", "v1", "v3"]);
    let yx = report(&["mekler", "mul", path, "-p", "3", "v3", "v1"]);
    assert_ne!(xy["result"]["product"], yx["result"]["product"]);
    let xy = report(&["mekler", "mul", path, "-p", "3", "v1", "v2"]);
    let yx = report(&["mekler", "mul", path, "-p", "3", "v2", "v1"]);
    assert_eq!(xy["result"]["product"], yx["result"]["product"]);
}

#[test]
fn distinguish_cfi_groups() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write_k4(dir.path());
    let r = report(&["distinguish", "cfi-groups", &k4, "-p", "3"]);
    assert_eq!(r["result"]["distinguished"], true);
    let bits = r["result"]["parity_bits"].as_array().unwrap();
    assert_ne!(bits[0], bits[1]);
}

#[test]
fn exit_codes() {
    assert_eq!(groupwl(&["--help"]).status.code(), Some(0));
    assert_eq!(groupwl(&["wl"]).status.code(), Some(1));
    assert_eq!(groupwl(&["wl", "graph", "/nonexistent/a", "/nonexistent/b", "-k", "1"]).status.code(), Some(1));
    assert_eq!(groupwl(&["group", "invariants", "Z0"]).status.code(), Some(1));
    assert_eq!(groupwl(&["mekler", "build", "-p", "4", "/dev/null"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let k4 = write_k4(dir.path());
    let out = dir.path().join("c.txt");
    report(&["cfi", "build", &k4, "-o", out.to_str().unwrap()]);
    let budget = groupwl(&["wl", "graph", out.to_str().unwrap(), out.to_str().unwrap(), "-k", "3", "--max-tuples", "10"]);
    assert_eq!(budget.status.code(), Some(2));
    assert!(budget.stdout.is_empty());
}
