//! End-to-end tests of the `rangeshape` binary: flag grammar, file
//! formats, report bodies, exit codes, and output determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rangeshape"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    binary()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "exit {:?}, stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn write_file(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("fixture written");
    path
}

const JORDAN: &str = r#"{"d": 2, "entries": [[[0,0],[1,0]],[[0,0],[0,0]]]}"#;
const SQUARE: &str = r#"{"vertices": [[1,1],[-1,1],[-1,-1],[1,-1]]}"#;
const QUARTIC: &str = r#"{"degree": 4, "coeffs": [[0,0,1.0],[4,0,-1.0],[0,4,-1.0]]}"#;
const DISK_POLY: &str = r#"{"degree": 2, "coeffs": [[0,0,1.0],[2,0,-1.0],[0,2,-1.0]]}"#;

#[test]
fn range_samples_the_jordan_disk() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "jordan.json", JORDAN);
    let output = run(
        &["range", "--input", "jordan.json", "--angles", "360", "--csv-out", "w.csv"],
        dir.path(),
    );
    let report = stdout_json(&output);
    assert_eq!(report["config"]["command"], "range");
    assert_eq!(report["config"]["angles"], 360);
    assert_eq!(report["matrix_dim"], 2);
    assert_eq!(report["degenerate"], false);
    let samples = report["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 360);
    for s in samples {
        let h = s["h"].as_f64().unwrap();
        assert!((h - 0.5).abs() <= 1e-8, "support {h}");
        let x = s["point"][0].as_f64().unwrap();
        let y = s["point"][1].as_f64().unwrap();
        assert!((x.hypot(y) - 0.5).abs() <= 1e-8);
    }

    let csv = std::fs::read_to_string(dir.path().join("w.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("theta,h,x,y"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 360);
    for row in rows {
        let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 4);
        assert!((fields[1] - 0.5).abs() <= 1e-8);
    }
    assert!(csv.ends_with('\n'));
}

#[test]
fn polar_samples_radius_two_for_jordan() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "jordan.json", JORDAN);
    let output = run(
        &["polar", "--input", "jordan.json", "--angles", "90", "--csv-out", "p.csv"],
        dir.path(),
    );
    let report = stdout_json(&output);
    assert_eq!(report["bounded"], true);
    for s in report["samples"].as_array().unwrap() {
        let r = s["radius"].as_f64().unwrap();
        assert!((r - 2.0).abs() <= 1e-8, "radius {r}");
    }
    let csv = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert!(csv.starts_with("phi,radius,x,y\n"));
    assert_eq!(csv.lines().count(), 91);
}

#[test]
fn polar_of_polygon_is_geometric_dual() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "square.json", SQUARE);
    let output = run(&["polar", "--polygon", "square.json"], dir.path());
    let report = stdout_json(&output);
    assert_eq!(report["bounded"], true);
    let vertices = report["polar"]["vertices"].as_array().unwrap();
    assert_eq!(vertices.len(), 4);
    // The square's polar is the unit diamond.
    for v in vertices {
        let x = v[0].as_f64().unwrap();
        let y = v[1].as_f64().unwrap();
        assert!((x.abs() + y.abs() - 1.0).abs() <= 1e-12);
    }

    // A polygon without the origin inside has an unbounded polar.
    write_file(
        dir.path(),
        "shifted.json",
        r#"{"vertices": [[2,2],[3,2],[3,3],[2,3]]}"#,
    );
    let output = run(&["polar", "--polygon", "shifted.json"], dir.path());
    let report = stdout_json(&output);
    assert_eq!(report["bounded"], false);
    assert!(report["polar"].is_null());
    assert_eq!(report["constraints"].as_array().unwrap().len(), 4);
}

#[test]
fn kippenhahn_reports_the_determinant_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "jordan.json", JORDAN);
    let output = run(&["kippenhahn", "--input", "jordan.json"], dir.path());
    let report = stdout_json(&output);
    assert_eq!(report["poly"]["degree"], 2);
    let coeffs = report["poly"]["coeffs"].as_array().unwrap();
    let quadratic: Vec<&Value> = coeffs
        .iter()
        .filter(|c| c[0].as_u64().unwrap() + c[1].as_u64().unwrap() == 2)
        .collect();
    for c in quadratic {
        let expected = if c[0] == 1 { 0.0 } else { -0.25 };
        assert!((c[2].as_f64().unwrap() - expected).abs() <= 1e-9);
    }
}

#[test]
fn rz_check_reports_failures_with_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "tvscreen.json", QUARTIC);
    let output = run(
        &["rz-check", "--poly", "tvscreen.json", "--directions", "64"],
        dir.path(),
    );
    let report = stdout_json(&output);
    assert_eq!(report["verdict"], "fail");
    assert!(report["worst_margin"].as_f64().unwrap() < -1e-7);
    let failures = report["failures"].as_array().unwrap();
    assert_eq!(failures.len(), 64);
    for f in failures {
        assert!(f["root"][1].as_f64().unwrap().abs() > 0.5);
    }
    assert!(!report["caveat"].as_str().unwrap().is_empty());

    write_file(dir.path(), "disk.json", DISK_POLY);
    let output = run(&["rz-check", "--poly", "disk.json"], dir.path());
    let report = stdout_json(&output);
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn decide_applies_the_degree_gate() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "square.json", SQUARE);
    let output = run(
        &["decide", "--polygon", "square.json", "--dim", "3"],
        dir.path(),
    );
    let report = stdout_json(&output);
    assert_eq!(report["verdict"], "no");
    assert_eq!(report["reason"], "degree_exceeds_d");
    assert!(report["witness"].is_null());

    let output = run(
        &["decide", "--polygon", "square.json", "--dim", "4"],
        dir.path(),
    );
    let report = stdout_json(&output);
    assert_eq!(report["verdict"], "yes");
    assert_eq!(report["reason"], "rz_pass");
    assert_eq!(report["witness"]["d"], 4);

    write_file(dir.path(), "disk.json", DISK_POLY);
    let output = run(
        &["decide", "--poly", "disk.json", "--dim", "2"],
        dir.path(),
    );
    let report = stdout_json(&output);
    assert_eq!(report["verdict"], "yes");
    assert!(report["witness"].is_null());
    assert!(!report["caveats"].as_array().unwrap().is_empty());
}

#[test]
fn symmetrize_emits_a_symmetric_matrix() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "jordan.json", JORDAN);
    let output = run(&["symmetrize", "--input", "jordan.json"], dir.path());
    let report = stdout_json(&output);
    assert_eq!(report["converged"], true);
    assert!(report["achieved_distance"].as_f64().unwrap() <= 1e-3);
    let entries = report["b"]["entries"].as_array().unwrap();
    assert_eq!(entries[0][1], entries[1][0]);
}

#[test]
fn json_out_redirects_the_report() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "jordan.json", JORDAN);
    let output = run(
        &[
            "range", "--input", "jordan.json", "--angles", "16", "--json-out", "out.json",
        ],
        dir.path(),
    );
    assert!(output.status.success());
    assert!(output.stdout.is_empty());
    let body = std::fs::read_to_string(dir.path().join("out.json")).unwrap();
    assert!(body.ends_with('\n'));
    let report: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(report["config"]["json_out"], "out.json");
}

#[test]
fn svg_output_draws_the_combined_figure() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "jordan.json", JORDAN);
    let output = run(
        &[
            "range", "--input", "jordan.json", "--angles", "64", "--svg-out", "fig.svg",
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let svg = std::fs::read_to_string(dir.path().join("fig.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.ends_with("</svg>\n"));
    // Range boundary, polar boundary, and eigenvalue markers all present.
    assert_eq!(svg.matches("<path").count(), 2);
    assert!(svg.matches("<circle").count() >= 1);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "jordan.json", JORDAN);
    for args in [
        vec!["range", "--input", "jordan.json", "--angles", "90"],
        vec!["symmetrize", "--input", "jordan.json", "--seed", "7"],
        vec!["kippenhahn", "--input", "jordan.json"],
    ] {
        let first = run(&args, dir.path());
        let second = run(&args, dir.path());
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "args {args:?}");
    }
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // Missing file.
    let output = run(&["range", "--input", "missing.json"], dir.path());
    assert_eq!(output.status.code(), Some(2));
    assert!(!output.stderr.is_empty());
    // Garbled JSON.
    write_file(dir.path(), "garbled.json", "{not json");
    let output = run(&["range", "--input", "garbled.json"], dir.path());
    assert_eq!(output.status.code(), Some(2));
    // Schema violation.
    write_file(dir.path(), "ragged.json", r#"{"d": 2, "entries": [[[0,0]]]}"#);
    let output = run(&["range", "--input", "ragged.json"], dir.path());
    assert_eq!(output.status.code(), Some(2));
    // Config invariant violations.
    write_file(dir.path(), "jordan.json", JORDAN);
    let output = run(
        &["range", "--input", "jordan.json", "--angles", "2"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(2));
    let output = run(
        &["rz-check", "--poly", "jordan.json", "--directions", "4"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(2));
    // Unknown flag for the subcommand.
    let output = run(
        &["decide", "--polygon", "jordan.json", "--dim", "3", "--csv-out", "x.csv"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(2));
    // A polynomial that is not positive at the origin violates the
    // decision precondition.
    write_file(
        dir.path(),
        "unanchored.json",
        r#"{"degree": 2, "coeffs": [[0,0,-1.0],[2,0,1.0]]}"#,
    );
    let output = run(
        &["rz-check", "--poly", "unanchored.json"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn thread_cap_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "jordan.json", JORDAN);
    let output = binary()
        .args(["range", "--input", "jordan.json", "--angles", "32"])
        .env("RANGESHAPE_THREADS", "1")
        .current_dir(dir.path())
        .output()
        .expect("binary runs");
    let report = stdout_json(&output);
    assert_eq!(report["samples"].as_array().unwrap().len(), 32);
}

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&["--help"], dir.path());
    assert_eq!(output.status.code(), Some(0));
    let help = String::from_utf8_lossy(&output.stdout);
    for command in ["range", "polar", "kippenhahn", "rz-check", "decide", "symmetrize"] {
        assert!(help.contains(command), "help lists {command}");
    }
    let output = run(&["--version"], dir.path());
    assert_eq!(output.status.code(), Some(0));
}
