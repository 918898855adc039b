use std::path::Path;
use std::process::{Command, Output};

use entbound::states::{bell_diagonal, psi_plus, StateFile};
use entbound::{DensityMatrix, Dims};
use serde_json::Value;

fn entbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_state(dir: &Path, name: &str, rho: &DensityMatrix) -> String {
    let path = dir.join(name);
    std::fs::write(&path, StateFile::from_density(rho).to_json()).unwrap();
    path.to_string_lossy().into_owned()
}

fn eval_json(path: &str) -> Value {
    let out = entbound(&["eval", path]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn bound<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["name"] == name)
        .unwrap_or_else(|| panic!("missing bound {name}"))
}

#[test]
fn eval_psi_plus() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_state(dir.path(), "psi.json", &psi_plus(2).unwrap().density());
    let v = eval_json(&path);
    assert!((bound(&v, "mb_lower")["c_scale"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((bound(&v, "dual_upper")["raw"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(v["checks"]["ppt"]["is_ppt"], false);
    assert!((v["exact"]["wootters"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn eval_maximally_mixed() {
    let dir = tempfile::tempdir().unwrap();
    let rho = DensityMatrix::maximally_mixed(Dims::bipartite(2));
    let v = eval_json(&write_state(dir.path(), "mm.json", &rho));
    for b in v["bounds"].as_array().unwrap() {
        if b["side"] == "lower" {
            assert_eq!(b["clipped"].as_f64().unwrap(), 0.0, "{}", b["name"]);
        }
    }
    assert_eq!(v["checks"]["ppt"]["is_ppt"], true);
}

#[test]
fn eval_bell_diagonal_reports_wootters() {
    let dir = tempfile::tempdir().unwrap();
    let s = bell_diagonal([0.75, 0.25, 0.0, 0.0]).unwrap();
    let v = eval_json(&write_state(dir.path(), "bd.json", &s.state));
    assert!((v["exact"]["wootters"].as_f64().unwrap() - 0.5).abs() < 1e-10);
}

#[test]
fn eval_csv_lists_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_state(dir.path(), "psi.json", &psi_plus(4).unwrap().density());
    let out = entbound(&["eval", &path, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("name,side,target,raw,clipped,c_scale\n"));
    assert!(text.contains("\nbreuer,lower,C,"));
    assert!(text.contains("\ntransposition,lower,C,"));
}

#[test]
fn eval_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let corrupt = dir.path().join("corrupt.json");
    let f = StateFile {
        dims: vec![2, 2],
        re: (0..4).map(|i| (0..4).map(|j| if i == j { 0.225 } else { 0.0 }).collect()).collect(),
        im: vec![vec![0.0; 4]; 4],
    };
    std::fs::write(&corrupt, f.to_json()).unwrap();
    let out = entbound(&["eval", corrupt.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace"));

    let malformed = dir.path().join("malformed.json");
    std::fs::write(&malformed, "{\"dims\": [2, 2], \"re\": [[1.0]]}").unwrap();
    assert_eq!(entbound(&["eval", malformed.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(entbound(&["eval", missing.to_str().unwrap()]).status.code(), Some(2));
}

fn compare_csv(actual: &str, expected: &str) {
    let a: Vec<&str> = actual.lines().collect();
    let e: Vec<&str> = expected.lines().collect();
    assert_eq!(a.len(), e.len());
    assert_eq!(a[0], e[0]);
    for (la, le) in a.iter().zip(&e).skip(1) {
        for (x, y) in la.split(',').zip(le.split(',')) {
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(x), Ok(y)) => assert!((x - y).abs() <= 1e-12, "{la} vs {le}"),
                _ => assert_eq!(x, y),
            }
        }
    }
}

#[test]
fn scan_matches_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = entbound(&["scan-rot4", "--step", "0.1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for name in ["rot4_full.csv", "rot4_p0.csv", "rot4_q0.csv"] {
        let actual = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let expected = std::fs::read_to_string(golden.join(name)).unwrap();
        compare_csv(&actual, &expected);
    }
}

#[test]
fn scan_is_deterministic_and_validates_step() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = entbound(&["scan-rot4", "--step", "0.1", "--format", "json", "--out", d.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("rot4_full.json")).unwrap();
    assert_eq!(read(&a), read(&b));
    let v: Value = serde_json::from_slice(&read(&a)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 286);
    for step in ["0", "0.2", "0.03", "abc"] {
        assert_eq!(entbound(&["scan-rot4", "--step", step, "--out", a.path().to_str().unwrap()]).status.code(), Some(2));
    }
}

#[test]
fn audit_passes_and_is_reproducible() {
    let first = entbound(&["audit", "--seed", "7", "--n", "300"]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stdout));
    let second = entbound(&["audit", "--seed", "7", "--n", "300"]);
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["failures"] == 0));
}

#[test]
fn audit_other_dims_and_usage_errors() {
    let out = entbound(&["audit", "--n", "40", "--dims", "2,2,2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("check,runs,failures\n"));
    assert_eq!(entbound(&["audit", "--n", "0"]).status.code(), Some(2));
    assert_eq!(entbound(&["audit", "--dims", "3"]).status.code(), Some(2));
    assert_eq!(entbound(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn thread_cap_from_environment() {
    let ok = Command::new(env!("CARGO_BIN_EXE_entbound"))
        .args(["audit", "--n", "20"])
        .env("ENTBOUND_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_entbound"))
        .args(["audit", "--n", "20"])
        .env("ENTBOUND_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
