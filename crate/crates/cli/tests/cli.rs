use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(rel: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(rel);
    p.display().to_string()
}

fn pencil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pencil"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn germ_cusp() {
    let o = pencil(&["germ", "(x^2+y^3)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("alpha=1 mu=2 delta=1 k=1 beta=1"));
}

#[test]
fn hj_a5() {
    let o = pencil(&["hj", "6", "1", "1"]);
    let s = stdout(&o);
    assert!(s.contains("[-2, -2, -2, -2, -2] (A5)"), "{s}");
    assert!(s.contains("K^2 = 0"));
}

#[test]
fn fiber_cusp() {
    let o = pencil(&["fiber", &fixture("fibers/cusp_g3.fib")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for line in ["c1^2 = 1/6", "c2 = 11/6", "chi = 1/6", "lambda = 1 "] {
        assert!(s.contains(line), "missing {line:?} in\n{s}");
    }
}

#[test]
fn structured_output_is_versioned_and_deterministic() {
    let path = fixture("fibers/tacnode_g3.fib");
    let a = pencil(&["--format", "structured", "sstable", &path]);
    let b = pencil(&["--format", "structured", "sstable", &path]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["command"], "sstable");
    assert_eq!(v["result"]["c_minus1"], "1/2");
}

#[test]
fn sstable_reports_contractions() {
    let o = pencil(&["sstable", &fixture("fibers/cusp_g3.fib"), "--degree", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("c_-1 = 5/6"));
    assert!(s.contains("c2 from the pullback = 11/6"));
    let o = pencil(&["sstable", &fixture("fibers/cusp_g3.fib"), "--degree", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn basechange_and_ledger() {
    let o = pencil(&[
        "basechange",
        &fixture("ledgers/cusp_ledger.json"),
        &fixture("ledgers/cusp_spec.json"),
    ]);
    let s = stdout(&o);
    assert!(s.contains("K^2_pi = 1/6") && s.contains("e_pi = 11/6") && s.contains("chi_pi = 1/6"), "{s}");
    let o = pencil(&["ledger", &fixture("ledgers/cusp_ledger.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("semistable slope = 59/11"));
}

#[test]
fn exit_codes() {
    let o = pencil(&["check", &fixture("ledgers/steep_ledger.json")]);
    assert_eq!(o.status.code(), Some(1));
    let o = pencil(&["check", &fixture("fibers/double_g3.fib"), &fixture("fibers/cusp_g3.fib")]);
    assert_eq!(o.status.code(), Some(0));
    let o = pencil(&["germ", "x^2+"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 4"));
    let o = pencil(&["fiber", &fixture("ledgers/cusp_spec.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn strict_turns_warnings_into_errors() {
    let expr = "(x^2+y^3)*(1+x)";
    assert_eq!(pencil(&["germ", expr]).status.code(), Some(0));
    assert_eq!(pencil(&["--strict", "germ", expr]).status.code(), Some(2));
}

#[test]
fn out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let o = pencil(&["--out", out.to_str().unwrap(), "hj", "5", "1", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(out).unwrap().contains("K^2 = -2/5"));
}

#[test]
fn corpus_is_ordered_by_path() {
    let o = pencil(&["corpus", &fixture("fibers")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let names: Vec<&str> = ["cusp_g3", "double_g3", "nodal_g2", "tacnode_g3"].to_vec();
    let pos: Vec<usize> = names.iter().map(|n| s.find(n).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    assert!(s.contains("4 files: 4 ok"));

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{").unwrap();
    std::fs::copy(fixture("fibers/cusp_g3.fib"), dir.path().join("a.fib")).unwrap();
    let o = pencil(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
