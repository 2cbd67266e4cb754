use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gradhom"))
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const ID: &str = r#"{"terms":[{"type":"monomial","c":0.5,"i":2,"j":0},{"type":"monomial","c":0.5,"i":0,"j":2}],"sign":1}"#;
const SADDLE: &str = r#"{"terms":[{"type":"monomial","c":0.5,"i":2,"j":0},{"type":"monomial","c":-0.5,"i":0,"j":2}]}"#;
const DOUBLE_WELL: &str = r#"{"terms":[
    {"type":"monomial","c":1,"i":4,"j":0},{"type":"monomial","c":-2,"i":2,"j":0},
    {"type":"monomial","c":1,"i":0,"j":0},{"type":"monomial","c":1,"i":0,"j":2}]}"#;

fn run(args: &[&str], input: &[&Path]) -> Output {
    let mut c = bin();
    c.args(args);
    for p in input {
        c.arg("--input").arg(p);
    }
    c.output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap()
}

#[test]
fn analyze_identity() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["analyze"], &[&write(d.path(), "id.json", ID)]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    let inv = &r["invariants"];
    assert_eq!((inv["winding"].as_i64(), inv["hessian_sum"].as_i64(), inv["morse_count"].as_i64()), (Some(1), Some(1), Some(1)));
    assert_eq!(inv["exit"]["kind"], "full");
    assert_eq!(inv["betti"], serde_json::json!([0, 0, 1]));
    assert_eq!(r["critical_points"].as_array().unwrap().len(), 1);
}

#[test]
fn analyze_saddle_writes_all_artifacts() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("out");
    let mut c = bin();
    c.arg("analyze").arg("--input").arg(write(d.path(), "s.json", SADDLE)).arg("--out").arg(&out);
    assert_eq!(c.status().unwrap().code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(r["invariants"]["winding"], -1);
    assert_eq!(r["invariants"]["exit"], serde_json::json!({"kind": "arcs", "m": 2}));
    assert_eq!(r["invariants"]["betti"], serde_json::json!([0, 1, 0]));
    let csv = std::fs::read_to_string(out.join("trajectories.csv")).unwrap();
    assert!(csv.starts_with("curve,t,x,y\n") && csv.contains("saddle0_unstable0,"));
    assert!(std::fs::read_to_string(out.join("portrait.svg")).unwrap().contains(r#"class="cp saddle""#));
}

#[test]
fn input_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let empty = write(d.path(), "e.json", r#"{"terms":[]}"#);
    let o = run(&["analyze"], &[&empty]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["exit_code"], 2);

    let o = run(&["portrait"], &[&d.path().join("missing.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["kind"], "parse");

    let extra = write(d.path(), "x.json", r#"{"terms":[{"type":"radial","c":1,"p":1,"q":2}]}"#);
    assert_eq!(run(&["analyze"], &[&extra]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--tol", "-1"], &[&write(d.path(), "id.json", ID)]).status.code(), Some(2));
}

#[test]
fn classify_commands() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["classify"], &[&write(d.path(), "dw.json", DOUBLE_WELL)]);
    assert_eq!(o.status.code(), Some(0));
    let c = stdout_json(&o);
    assert_eq!(c["label"], "IdClass");
    assert_eq!(c["witness"].as_array().unwrap().len(), 1);
    assert_eq!(c["witness"][0]["move"], "cancel_pair");
    assert_eq!(c["witness"][0]["degree_after"], 1);

    let mid = ID.replace(r#""sign":1"#, r#""sign":-1"#);
    let o = run(&["classify"], &[&write(d.path(), "mid.json", &mid)]);
    assert_eq!(stdout_json(&o)["label"], "MinusIdClass");

    let o = run(&["classify"], &[&write(d.path(), "s.json", SADDLE)]);
    assert_eq!(o.status.code(), Some(4));
    let c = stdout_json(&o);
    assert_eq!(c["label"], "Unresolved(-1)");
    assert!(c["note"].as_str().unwrap().contains("open conjecture"));
}

#[test]
fn reduce_logs_graph_before_and_after() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["reduce"], &[&write(d.path(), "dw.json", DOUBLE_WELL)]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["counts"]["initial"], serde_json::json!({"a": 2, "b": 1}));
    assert_eq!(r["counts"]["final"], serde_json::json!({"a": 1, "b": 0}));
}

#[test]
fn homotopy_check_constructors() {
    let d = tempfile::tempdir().unwrap();
    let id = write(d.path(), "id.json", ID);
    let o = run(&["homotopy-check", "--constructor", "milnor"], &[&id]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["passed"], true);
    for k in ["epsilon", "delta1", "m1", "t1", "l"] {
        assert!(v["constants"][k].as_f64().unwrap() > 0.0, "{k}");
    }
    let x = write(d.path(), "x.json", r#"{"terms":[{"type":"monomial","c":1,"i":1,"j":0}]}"#);
    let y = write(d.path(), "y.json", r#"{"terms":[{"type":"monomial","c":1,"i":0,"j":1}]}"#);
    assert_eq!(run(&["homotopy-check", "--constructor", "radial_push"], &[&x]).status.code(), Some(0));
    assert_eq!(run(&["homotopy-check", "--constructor", "constant_connect"], &[&x, &y]).status.code(), Some(0));
    // Milnor needs a zero.
    assert_eq!(run(&["homotopy-check", "--constructor", "milnor"], &[&x]).status.code(), Some(4));
    assert_eq!(run(&["homotopy-check", "--constructor", "nope"], &[&x]).status.code(), Some(2));
    assert_eq!(run(&["homotopy-check", "--constructor", "straight_line"], &[&x]).status.code(), Some(2));
}

#[test]
fn portrait_of_double_well() {
    let d = tempfile::tempdir().unwrap();
    let dw = write(d.path(), "dw.json", DOUBLE_WELL);
    let out = d.path().join("p");
    let mut c = bin();
    c.arg("portrait").arg("--input").arg(&dw).arg("--out").arg(&out);
    assert_eq!(c.status().unwrap().code(), Some(0));
    let svg = std::fs::read_to_string(out.join("portrait.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="cp source""#).count(), 2);
    assert_eq!(svg.matches(r#"class="cp saddle""#).count(), 1);
    let t: Value = serde_json::from_str(&std::fs::read_to_string(out.join("trajectories.json")).unwrap()).unwrap();
    // Stable branches of the saddle run along the x-axis from the two sources.
    let stable: Vec<_> = t["curves"].as_array().unwrap().iter().filter(|c| c["name"].as_str().unwrap().contains("stable") && !c["name"].as_str().unwrap().contains("unstable")).collect();
    assert_eq!(stable.len(), 2);
    for c in stable {
        assert!(c["points"].as_array().unwrap().iter().all(|p| p[2].as_f64().unwrap().abs() < 1e-9));
    }

    let again = d.path().join("q");
    let mut c = bin();
    c.arg("portrait").arg("--input").arg(&dw).arg("--out").arg(&again);
    assert_eq!(c.status().unwrap().code(), Some(0));
    for f in ["portrait.svg", "trajectories.csv", "trajectories.json"] {
        assert_eq!(std::fs::read(out.join(f)).unwrap(), std::fs::read(again.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn portrait_of_identity_has_outward_rays() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["portrait"], &[&write(d.path(), "id.json", ID)]);
    assert_eq!(o.status.code(), Some(0));
    let svg = String::from_utf8(o.stdout).unwrap();
    assert_eq!(svg.matches(r#"class="cp "#).count(), 1);
    assert!(svg.matches(r#"class="orbit""#).count() >= 16);
}

#[test]
fn corpus_is_deterministic() {
    let d = tempfile::tempdir().unwrap();
    let runs: Vec<_> = ["a", "b"]
        .iter()
        .map(|n| {
            let out = d.path().join(n);
            let mut c = bin();
            c.args(["corpus", "--count", "6", "--seed", "7"]).arg("--out").arg(&out);
            assert_eq!(c.status().unwrap().code(), Some(0));
            out
        })
        .collect();
    for f in ["aggregate.json", "fields.json"] {
        assert_eq!(std::fs::read(runs[0].join(f)).unwrap(), std::fs::read(runs[1].join(f)).unwrap(), "{f}");
    }
    let o = bin().args(["corpus", "--count", "0"]).output().unwrap();
    let a = stdout_json(&o);
    assert_eq!((a["count"].as_u64(), a["max_degree"].is_null()), (Some(0), true));
}
