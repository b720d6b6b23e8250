//! End-to-end tests of the delpack binary: exit codes, document round
//! trips, result JSON, probe JSON lines, and byte-stable SVG.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_delpack"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Scratch file path unique to this test process and label.
fn scratch(label: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("delpack-cli-{}-{}", std::process::id(), label));
    p
}

fn write_scratch(label: &str, content: &str) -> PathBuf {
    let p = scratch(label);
    std::fs::write(&p, content).expect("scratch file writes");
    p
}

/// Generates a catalog polygon into a scratch file and returns the
/// path.
fn gen_to(label: &str, args: &[&str]) -> PathBuf {
    let p = scratch(label);
    let mut full: Vec<&str> = vec!["gen"];
    full.extend_from_slice(args);
    full.push("-o");
    let path_str = p.to_str().unwrap().to_string();
    full.push(&path_str);
    let out = run(&full);
    assert_eq!(code_of(&out), 0, "gen {:?} failed: {:?}", args, out);
    p
}

#[test]
fn validate_accepts_the_square() {
    let square = gen_to("sq-valid", &["square"]);
    let out = run(&["validate", square.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    assert!(stdout_of(&out).contains("valid Delzant polygon"));
}

#[test]
fn validate_reports_non_smooth_vertex() {
    let doc = r#"{
  "version": 1,
  "vertices": [["0", "0"], ["2", "0"], ["1", "1"]]
}"#;
    let path = write_scratch("nonsmooth", doc);
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code_of(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("(1, 1)"), "report must name the bad vertex: {}", text);
    assert!(text.contains("determinant magnitude 2"), "report: {}", text);
}

#[test]
fn validate_rejects_malformed_json() {
    let path = write_scratch("malformed", "{ not json");
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn validate_rejects_wrong_version() {
    let doc = r#"{"version": 9, "vertices": [["0","0"],["1","0"],["0","1"]]}"#;
    let path = write_scratch("badversion", doc);
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn density_of_square_is_certified_one() {
    let square = gen_to("sq-dens", &["square"]);
    let out = run(&["density", square.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let v: Value = serde_json::from_str(&stdout_of(&out)).expect("result JSON");
    assert_eq!(v["operation"], "density");
    assert_eq!(v["results"][0]["name"], "lower");
    assert_eq!(v["results"][0]["rational"], "1");
    assert_eq!(v["results"][0]["decimal"], "1");
    assert_eq!(v["results"][1]["rational"], "1");
    assert_eq!(v["certified"], true);
    let witness: Vec<String> = v["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    assert!(witness == ["1", "0", "1", "0"] || witness == ["0", "1", "0", "1"]);
}

#[test]
fn density_of_rectangle_is_one_half() {
    let rect = gen_to("rect-dens", &["rectangle", "2", "1"]);
    let out = run(&["density", rect.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let v: Value = serde_json::from_str(&stdout_of(&out)).expect("result JSON");
    assert_eq!(v["results"][0]["rational"], "1/2");
    assert_eq!(v["results"][0]["decimal"], "0.5");
    assert_eq!(v["certified"], true);
}

#[test]
fn density_avoiding_one_square_corner_stays_one() {
    let square = gen_to("sq-avoid", &["square"]);
    let out = run(&["density", square.to_str().unwrap(), "--avoid", "0"]);
    assert_eq!(code_of(&out), 0);
    let v: Value = serde_json::from_str(&stdout_of(&out)).expect("result JSON");
    assert_eq!(v["results"][0]["rational"], "1");
    assert_eq!(v["certified"], true);
    assert_eq!(v["inputs"]["avoid"], "0");
}

#[test]
fn density_avoid_out_of_range_is_a_precondition_failure() {
    let square = gen_to("sq-avoid-bad", &["square"]);
    let out = run(&["density", square.to_str().unwrap(), "--avoid", "7"]);
    assert_eq!(code_of(&out), 3);
}

#[test]
fn distance_of_a_polygon_to_itself_is_zero() {
    let square = gen_to("sq-dist", &["square"]);
    let out = run(&["distance", square.to_str().unwrap(), square.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let v: Value = serde_json::from_str(&stdout_of(&out)).expect("result JSON");
    assert_eq!(v["results"][0]["rational"], "0");
}

#[test]
fn distance_between_square_and_rectangle() {
    let square = gen_to("sq-dist2", &["square"]);
    let rect = gen_to("rect-dist2", &["rectangle", "2", "1"]);
    let out = run(&["distance", square.to_str().unwrap(), rect.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout_of(&out)).expect("result JSON");
    assert_eq!(v["results"][0]["rational"], "1");
}

#[test]
fn chop_produces_a_valid_pentagon() {
    let square = gen_to("sq-chop", &["square"]);
    let out = run(&["chop", square.to_str().unwrap(), "--vertex", "0", "--scale", "1/4"]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    let v: Value = serde_json::from_str(&text).expect("polygon JSON");
    assert_eq!(v["version"], 1);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 5);
    let pent = write_scratch("pent-chop", &text);
    let check = run(&["validate", pent.to_str().unwrap()]);
    assert_eq!(code_of(&check), 0);
}

#[test]
fn chop_scale_beyond_the_corner_fails_as_precondition() {
    let square = gen_to("sq-chop-big", &["square"]);
    let out = run(&["chop", square.to_str().unwrap(), "--vertex", "0", "--scale", "2"]);
    assert_eq!(code_of(&out), 3);
}

#[test]
fn perturb_shrinks_a_rectangle_to_the_square() {
    let rect = gen_to("rect-pert", &["rectangle", "11/10", "1"]);
    let out = run(&["perturb", rect.to_str().unwrap(), "--side", "1", "--delta", "-1/10"]);
    assert_eq!(code_of(&out), 0);
    let moved: Value = serde_json::from_str(&stdout_of(&out)).expect("polygon JSON");
    let square = gen_to("sq-pert", &["square"]);
    let square_doc: Value =
        serde_json::from_str(&std::fs::read_to_string(&square).unwrap()).expect("JSON");
    assert_eq!(moved, square_doc);
}

#[test]
fn perturb_that_collapses_the_polygon_fails_as_precondition() {
    let square = gen_to("sq-pert-bad", &["square"]);
    let out = run(&["perturb", square.to_str().unwrap(), "--side", "1", "--delta", "-1"]);
    assert_eq!(code_of(&out), 3);
}

#[test]
fn chop_probe_emits_json_lines_and_a_witnessed_verdict() {
    let square = gen_to("sq-probe", &["square"]);
    let out = run(&[
        "probe",
        square.to_str().unwrap(),
        "--mode",
        "chop",
        "--params",
        "1/10,1/100",
    ]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    let lines: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).expect("each probe line is JSON"))
        .collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["record"], "base");
    assert_eq!(lines[0]["lower"], "1");
    assert_eq!(lines[1]["record"], "step");
    assert_eq!(lines[1]["distance"], "1/50");
    assert_eq!(lines[1]["ceiling"], "2/49");
    assert_eq!(lines[2]["distance"], "1/5000");
    assert_eq!(lines[3]["record"], "verdict");
    assert_eq!(lines[3]["kind"], "discontinuity witnessed");
    assert_eq!(lines[3]["gap_achieved"], "48/49");
}

#[test]
fn support_probe_reports_consistent_continuity() {
    let square = gen_to("sq-probe-sup", &["square"]);
    let out = run(&[
        "probe",
        square.to_str().unwrap(),
        "--mode",
        "support",
        "--side",
        "1",
        "--params",
        "1/10,1/100,1/1000",
    ]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[1]["distance"], "1/10");
    assert_eq!(lines[1]["lower"], "10/11");
    assert_eq!(lines[4]["kind"], "continuity consistent");
}

#[test]
fn support_probe_requires_a_side() {
    let square = gen_to("sq-probe-noside", &["square"]);
    let out = run(&["probe", square.to_str().unwrap(), "--mode", "support", "--params", "1/10"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn classify_square_extends_at_every_vertex() {
    let square = gen_to("sq-classify", &["square"]);
    let out = run(&["classify", square.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let v: Value = serde_json::from_str(&stdout_of(&out)).expect("classifier JSON");
    assert_eq!(v["classification"], "extends at vertices");
    assert_eq!(v["equal_set"], serde_json::json!([0, 1, 2, 3]));
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 4);
}

#[test]
fn gen_rejects_unknown_names_and_bad_arity() {
    assert_eq!(code_of(&run(&["gen", "heptagon"])), 2);
    assert_eq!(code_of(&run(&["gen", "rectangle", "2"])), 2);
    assert_eq!(code_of(&run(&["gen", "rectangle", "0", "1"])), 3);
}

#[test]
fn gen_hirzebruch_round_trips_and_validates() {
    let path = gen_to("hirz-gen", &["hirzebruch", "1", "1", "1"]);
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
}

#[test]
fn render_is_byte_deterministic_with_two_triangles() {
    let square = gen_to("sq-render", &["square"]);
    let a = scratch("render-a.svg");
    let b = scratch("render-b.svg");
    for target in [&a, &b] {
        let out = run(&[
            "render",
            square.to_str().unwrap(),
            "--packing",
            "1,0,1,0",
            "-o",
            target.to_str().unwrap(),
        ]);
        assert_eq!(code_of(&out), 0);
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    let text = String::from_utf8(bytes_a).unwrap();
    assert_eq!(text.matches("fill-opacity").count(), 2);
    assert!(text.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\""));
}

#[test]
fn render_rejects_inadmissible_packing() {
    let square = gen_to("sq-render-bad", &["square"]);
    let target = scratch("render-bad.svg");
    let out = run(&[
        "render",
        square.to_str().unwrap(),
        "--packing",
        "1,1,1,1",
        "-o",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 3);
}

#[test]
fn density_rejects_missing_file_as_parse_failure() {
    let out = run(&["density", "/nonexistent/delpack-missing.json"]);
    assert_eq!(code_of(&out), 2);
}
