use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tropvor::voronoi::Diagram;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tropvor"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

const L2: &str = r#"{"n": 3, "basis": [[2, -2, 0], [-1, 2, -1]], "radius": 6}"#;
const PAIR: &str = r#"{"n": 3, "sites": [[-6, -5, 11], [-5, 12, -7]]}"#;
const CYCLIC: &str = r#"{"n": 3, "sites": [[1, -1, 0], [0, 1, -1], [-1, 0, 1]]}"#;

#[test]
fn region_of_l2_window_has_six_generators() {
    let v = json(&run(&["region"], L2));
    assert_eq!(v["generators"].as_array().unwrap().len(), 6);
    assert_eq!(v["site"], 0);
}

#[test]
fn two_site_diagram_has_three_cells() {
    let v = json(&run(&["bisector"], PAIR));
    let dims: Vec<i64> = v["cells"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["dim"].as_i64().unwrap())
        .collect();
    assert_eq!(dims, vec![2, 2, 1]);
    assert_eq!(v["order"].as_array().unwrap().len(), 2);
}

#[test]
fn bisector_rejects_three_sites() {
    assert_eq!(run(&["bisector"], CYCLIC).status.code(), Some(3));
}

#[test]
fn verify_lift_needs_generic_sites() {
    let out = run(
        &["verify-lift"],
        r#"{"n": 3, "sites": [[0, 0, 0], [1, -1, 0]]}"#,
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn verify_lift_reports_isomorphism() {
    let v = json(&run(&["verify-lift"], PAIR));
    assert_eq!(v["isomorphic"], true);
}

#[test]
fn malformed_input_exits_with_parse_status() {
    for bad in [
        "{",
        r#"{"n": 3}"#,
        r#"{"n": 3, "sites": [[0, 0, 0]], "extra": 1}"#,
        r#"{"n": 3, "sites": [[0, 0]]}"#,
        r#"{"n": 3, "sites": [["1/0", 0, 0]]}"#,
        r#"{"n": 3, "sites": [[1, 0, 0]]}"#,
    ] {
        assert_eq!(run(&["diagram"], bad).status.code(), Some(2), "input {bad}");
    }
}

#[test]
fn precondition_failures_exit_with_three() {
    assert_eq!(
        run(&["diagram", "--cap", "2"], CYCLIC).status.code(),
        Some(3)
    );
    assert_eq!(run(&["region", "--site", "5"], PAIR).status.code(), Some(3));
}

#[test]
fn render_only_draws_three_dimensional_sites() {
    let four = r#"{"n": 4, "sites": [[0, 0, 0, 0], [3, -1, -1, -1]]}"#;
    assert_eq!(run(&["render"], four).status.code(), Some(3));
}

#[test]
fn render_is_deterministic() {
    let a = run(&["render", "--width", "300", "--height", "200"], CYCLIC);
    let b = run(&["render", "--width", "300", "--height", "200"], CYCLIC);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let svg = String::from_utf8(a.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<circle").count(), 3);
    for color in ["#4e79a7", "#f28e2b", "#e15759"] {
        assert!(svg.contains(&format!("fill=\"{color}\"")));
    }
}

#[test]
fn diagram_round_trips_through_files() {
    let dir = std::env::temp_dir().join(format!("tropvor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("sites.json");
    let output = dir.join("diagram.json");
    std::fs::write(&input, CYCLIC).unwrap();
    let out = run(
        &[
            "diagram",
            "--input",
            input.to_str().unwrap(),
            "--output",
            output.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&output).unwrap();
    let d: Diagram = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&d).unwrap() + "\n", text);
    assert!(d.cells.iter().any(|c| c.label == vec![0, 1, 2]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn delone_of_lattice_window_is_a_complex() {
    let v = json(&run(
        &["delone", "--radius", "2"],
        r#"{"n": 3, "basis": [[1, -1, 0], [0, 1, -1]], "radius": 5}"#,
    ));
    let facets = v["facets"].as_array().unwrap();
    assert!(!facets.is_empty());
    assert!(facets.iter().all(|f| f.as_array().unwrap().len() <= 3));
}
