use approx::assert_relative_eq;
use johncut_cli::Report;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

const SQUARE: &str = r#"{"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}"#;

fn johncut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_johncut")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &TempDir, kind: &str, extra: &[&str]) -> PathBuf {
    let out = dir.path().join(format!("{kind}.json"));
    let mut args = vec!["generate", kind, "--out", s(&out)];
    args.extend_from_slice(extra);
    let o = johncut(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn perimeter(path: &Path) -> f64 {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let pts: Vec<(f64, f64)> = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_f64().unwrap(), p[1].as_f64().unwrap()))
        .collect();
    (0..pts.len())
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
            (a.0 - b.0).hypot(a.1 - b.1)
        })
        .sum()
}

fn load_report(path: &Path) -> Report {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_koch_perimeters() {
    let dir = TempDir::new().unwrap();
    let mut got = vec![];
    for i in ["0", "1", "2"] {
        let out = dir.path().join(format!("koch{i}.json"));
        let o = johncut(&["generate", "koch-variant", "--n", i, "--eta", "0.5", "--out", s(&out)]);
        assert_eq!(code(&o), 0);
        got.push(perimeter(&out));
    }
    assert_relative_eq!(got[0], 3.0, max_relative = 1e-12);
    assert_relative_eq!(got[1], 4.0, max_relative = 1e-12);
    assert_relative_eq!(got[2] / got[1], 1.0515668, max_relative = 1e-7);
}

#[test]
fn unknown_fixture_is_an_error() {
    let o = johncut(&["generate", "dodecahedron"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("dodecahedron"));
}

#[test]
fn decompose_l_shape_with_svg() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "l-shape", &[]);
    let (out, svg) = (dir.path().join("r.json"), dir.path().join("r.svg"));
    let o = johncut(&["decompose", "--input", s(&input), "--theta", "0.25", "--out", s(&out), "--svg", s(&svg)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["outcome"]["decomposition"]["ledger"]["pass"], Value::Bool(true));
    assert_eq!(v["passed"], Value::Bool(true));

    let report = load_report(&out);
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed SVG");
    let pieces = doc.descendants().filter(|n| n.attribute("class") == Some("piece")).count();
    assert_eq!(pieces, report.piece_count());
    assert_eq!(doc.root_element().attribute("viewBox"), Some("0 0 1000 1000"));
    assert!(doc.descendants().any(|n| n.attribute("class") == Some("disk")));
    assert!(doc.descendants().any(|n| n.attribute("class") == Some("john-curve")));
}

#[test]
fn decompose_koch_logs_piece_count() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "koch-variant", &["--n", "2"]);
    let o = johncut(&["decompose", "--input", s(&input), "--theta", "0.25"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("pieces="));
    let report: Report = serde_json::from_slice(&o.stdout).expect("report on stdout");
    assert!(report.passed);
}

#[test]
fn multi_piece_svg_matches_report() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "spiral", &["--n", "4"]);
    let (out, svg) = (dir.path().join("r.json"), dir.path().join("r.svg"));
    let o = johncut(&["decompose", "--input", s(&input), "--out", s(&out), "--svg", s(&svg)]);
    assert_eq!(code(&o), 0);
    let report = load_report(&out);
    assert!(report.piece_count() > 1);
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.attribute("class") == Some("piece")).count(), report.piece_count());
    assert!(doc.descendants().any(|n| n.attribute("class") == Some("cut")));
}

#[test]
fn malformed_json_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"vertices": [[0, 0], [1, 0]"#);
    let o = johncut(&["decompose", "--input", s(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
}

#[test]
fn invalid_parameters_exit_2() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.json", SQUARE);
    assert_eq!(code(&johncut(&["decompose", "--input", s(&sq), "--theta", "1.5"])), 2);
    assert_eq!(code(&johncut(&["certify", "--input", s(&sq), "--check", "john"])), 2);
    assert_eq!(code(&johncut(&["decompose", "--input", s(&dir.path().join("missing.json"))])), 2);
}

#[test]
fn certify_square_john() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.json", SQUARE);
    let o = johncut(&["certify", "--input", s(&sq), "--check", "john", "--param", "0.5"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"]["certificate"]["type"], "john");
}

#[test]
fn certify_notch_semiconvex_fails_with_counterexample() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "notched-rect", &["--eta", "0.1"]);
    let out = dir.path().join("r.json");
    let o = johncut(&["certify", "--input", s(&input), "--check", "semiconvex", "--param", "0.1", "--out", s(&out)]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let ce = &v["outcome"]["certificate"]["counterexample"];
    assert!(ce.is_object(), "{v}");
    assert!(ce["chord"].is_object());
}

#[test]
fn certify_square_rotund_fails_above_ratio() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.json", SQUARE);
    assert_eq!(code(&johncut(&["certify", "--input", s(&sq), "--check", "rotund", "--param", "0.36"])), 1);
    assert_eq!(code(&johncut(&["certify", "--input", s(&sq), "--check", "rotund", "--param", "0.35"])), 0);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "comb", &["--n", "3"]);
    let run = || johncut(&["decompose", "--input", s(&input), "--theta", "0.5", "--seed", "7"]).stdout;
    let (a, b) = (run(), run());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn verify_reproduces_verdicts() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "notched-rect", &["--eta", "0.1"]);
    let out = dir.path().join("r.json");
    assert_eq!(code(&johncut(&["decompose", "--input", s(&input), "--out", s(&out)])), 0);
    assert_eq!(code(&johncut(&["verify", "--report", s(&out)])), 0);

    // Flipping a recorded bit must be caught.
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    v["passed"] = Value::Bool(false);
    let tampered = write(&dir, "t.json", &v.to_string());
    let o = johncut(&["verify", "--report", s(&tampered)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("mismatch: report"));

    let cert = dir.path().join("c.json");
    assert_eq!(code(&johncut(&["certify", "--input", s(&input), "--check", "semiconvex", "--param", "0.1", "--out", s(&cert)])), 1);
    assert_eq!(code(&johncut(&["verify", "--report", s(&cert)])), 0);
}

#[test]
fn decompose_domain_input() {
    let dir = TempDir::new().unwrap();
    let ring: Vec<[f64; 2]> = (0..512)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / 512.0;
            [a.cos(), a.sin()]
        })
        .collect();
    let input = write(&dir, "disk.json", &serde_json::json!({ "outer": ring, "holes": [] }).to_string());
    let (out, svg) = (dir.path().join("r.json"), dir.path().join("r.svg"));
    let o = johncut(&["decompose", "--input", s(&input), "--theta", "0.5", "--out", s(&out), "--svg", s(&svg)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = load_report(&out);
    assert_eq!(report.input.kind, "domain");
    let doc_text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&doc_text).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.attribute("class") == Some("piece")).count(), report.piece_count());
}
