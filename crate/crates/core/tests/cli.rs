use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn corpus(kind: &str, name: &str) -> PathBuf {
    let ext = match kind {
        "graphs" => "graph",
        "maps" => "map",
        _ => "weights",
    };
    Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("corpus/{kind}/{name}.{ext}"))
}

fn g(name: &str) -> PathBuf {
    corpus("graphs", name)
}

fn m(name: &str) -> PathBuf {
    corpus("maps", name)
}

/// Runs the tool with `--json` and returns the exit code and the report.
fn run(args: &[&dyn AsRef<std::ffi::OsStr>]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_drsys"));
    cmd.arg("--quiet").arg("--json").arg(&json);
    for a in args {
        cmd.arg(a);
    }
    let code = cmd.status().unwrap().code().unwrap();
    let report = std::fs::read_to_string(&json)
        .map(|s| serde_json::from_str(&s).unwrap())
        .unwrap_or(Value::Null);
    (code, report)
}

#[test]
fn invariants_examples() {
    let (code, r) = run(&[&"invariants", &g("o2"), &"--max-period", &"3"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["periodic_counts"], serde_json::json!([2, 4, 8]));
    let (_, r) = run(&[&"invariants", &g("loop"), &"--max-period", &"2"]);
    assert_eq!(r["result"]["periodic_counts"], serde_json::json!([1, 1]));
    assert_eq!(r["result"]["condition_l"], false);
    let (_, r) = run(&[&"invariants", &g("pt")]);
    assert_eq!(r["result"]["sinks"], 1);
    assert!(r["result"]["periodic_counts"].as_array().unwrap().iter().all(|c| c == 0));
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn check_conjugacy_exit_codes() {
    let (code, _) = run(&[&"check-conjugacy", &g("o2"), &g("o2"), &"--map", &m("o2_swap")]);
    assert_eq!(code, 0);
    let (code, r) = run(&[
        &"check-conjugacy", &g("pt"), &g("loop"),
        &"--map", &m("pt_to_loop"), &"--inverse", &m("loop_to_pt"),
    ]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["verdict"]["failing_condition"], "dom");
    let (code, r) = run(&[&"check-conjugacy", &g("o2"), &g("o3")]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["certificate"]["kind"], "periodic_count");
    assert_eq!(r["result"]["certificate"]["p"], 1);
    let (code, _) = run(&[&"check-conjugacy", &g("o2"), &g("o2")]);
    assert_eq!(code, 3);
    // the inverse of a state-wise letter bijection is derived automatically
    let (code, r) = run(&[&"check-conjugacy", &g("o2"), &g("o2"), &"--map", &m("o2_first_swap")]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["verdict"]["failing_condition"], "commute");
    // the out-split code has a silent first step and needs its inverse spelled out
    let (code, _) = run(&[&"check-conjugacy", &g("o2"), &g("o2_split"), &"--map", &m("o2_to_split")]);
    assert_eq!(code, 3);
    // a wrong inverse leaves the map unverified
    let (code, r) = run(&[
        &"check-conjugacy", &g("o2"), &g("o2"),
        &"--map", &m("o2_swap"), &"--inverse", &m("o2_identity"),
    ]);
    assert_eq!(code, 3);
    assert_eq!(r["result"]["verdict"]["is_homeomorphism"], false);
}

#[test]
fn cocycle_intertwine_exit_codes() {
    let (code, _) = run(&[&"cocycle-intertwine", &g("o2"), &g("o2"), &"--map", &m("o2_swap")]);
    assert_eq!(code, 0);
    let (code, r) = run(&[
        &"cocycle-intertwine", &g("o2"), &g("o2"),
        &"--map", &m("o2_first_swap"), &"--inverse", &m("o2_first_swap"), &"--depth", &"1",
    ]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["intertwine"]["witness_g"], "cyl a");
    assert_eq!(r["result"]["intertwine"]["depth"], 1);
    let (code, _) = run(&[&"cocycle-intertwine", &g("o2"), &g("o2"), &"--map", &m("o2_identity")]);
    assert_eq!(code, 0);
    let (code, _) = run(&[
        &"cocycle-intertwine", &g("o2"), &g("o2"),
        &"--map", &m("o2_swap"), &"--inverse", &m("o2_identity"),
    ]);
    assert_eq!(code, 3);
}

#[test]
fn cstar_exit_codes() {
    let (code, r) = run(&[&"cstar", &g("p2"), &"--verify", &"lemma39"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["fixed_points"]["is_diagonal"], true);
    assert!(r["result"]["fixed_points"]["max_residual"].as_f64().unwrap() < 1e-9);
    let (code, r) = run(&[
        &"cstar", &g("p2"), &"--verify", &"lemma39", &"--weights", &corpus("weights", "zero"),
    ]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["fixed_points"]["is_diagonal"], false);
    let (code, _) = run(&[&"cstar", &g("loop"), &"--verify", &"lemma39"]);
    assert_eq!(code, 1);
    let (code, r) = run(&[
        &"cstar", &g("p2"), &"--verify", &"prop312",
        &"--graph-f", &g("p2_relabel"), &"--map", &m("p2_relabel"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["intertwining"]["ok"], true);
    let (code, r) = run(&[
        &"cstar", &g("p2"), &"--verify", &"prop312",
        &"--graph-f", &g("p2"), &"--map", &m("p2_point_swap"), &"--inverse", &m("p2_point_swap"),
    ]);
    assert_eq!(code, 1);
    assert!(r["result"]["leg_map_intertwining"]["max_residual"].as_f64().unwrap() >= 1e-6);
}

#[test]
fn parse_and_io_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "vertex v\nedge a v w\n").unwrap();
    let (code, r) = run(&[&"invariants", &bad]);
    assert_eq!(code, 2);
    assert!(r["result"]["error"].as_str().unwrap().contains("line 2"));
    let (code, _) = run(&[&"invariants", &dir.path().join("missing.graph")]);
    assert_eq!(code, 2);
    let bad_map = dir.path().join("bad.map");
    std::fs::write(&bad_map, "state q\nmap q a z q\n").unwrap();
    let (code, _) = run(&[&"check-conjugacy", &g("o2"), &g("o2"), &"--map", &bad_map]);
    assert_eq!(code, 2);
    let status = Command::new(env!("CARGO_BIN_EXE_drsys")).arg("no-such-command").output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn reports_are_deterministic() {
    let o2 = g("o2");
    let split = g("o2_split");
    let fwd = m("o2_to_split");
    let bwd = m("split_to_o2");
    let args: [&dyn AsRef<std::ffi::OsStr>; 9] =
        [&"--seed", &"17", &"check-conjugacy", &o2, &split, &"--map", &fwd, &"--inverse", &bwd];
    let (c1, a) = run(&args);
    let (c2, b) = run(&args);
    assert_eq!(c1, 0);
    assert_eq!(c1, c2);
    assert_eq!(
        serde_json::to_string(&without_timing(a)).unwrap(),
        serde_json::to_string(&without_timing(b)).unwrap()
    );
    let p2 = g("p2");
    let args: [&dyn AsRef<std::ffi::OsStr>; 6] =
        [&"--seed", &"3", &"cstar", &p2, &"--verify", &"lemma39"];
    let (_, a) = run(&args);
    let (_, b) = run(&args);
    assert_eq!(without_timing(a), without_timing(b));
}
