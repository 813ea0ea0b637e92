use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kappa_curves::geom::Curve;
use kappa_curves::homotopy::verify_trace;
use kappa_curves::io::{parse_curve, parse_trace};

fn kcurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcurve")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn out_path(dir: &tempfile::TempDir, name: &str) -> (PathBuf, String) {
    let p = dir.path().join(name);
    let s = p.to_string_lossy().into_owned();
    (p, s)
}

#[test]
fn classify_reports_two_classes_for_a_short_chord() {
    let o = kcurve(&["classify", "--x", "0,0", "--y", "1,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("classes: 2\n"));
    let o = kcurve(&["classify", "--x", "0,0", "--y", "3,0", "--kappa", "1"]);
    assert!(stdout(&o).starts_with("classes: 1\n"));
}

#[test]
fn label_prints_files_in_order() {
    let o = kcurve(&["label", &fixture("canonical/segment_d1.json"), &fixture("canonical/random_d1_s1.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].ends_with("segment_d1.json: InLens"));
    assert!(lines[1].ends_with("random_d1_s1.json: NotInLens"));
}

#[test]
fn batch_exit_code_is_the_worst() {
    let o = kcurve(&["verify", &fixture("canonical/segment_d1.json"), &fixture("invalid/tight_arc.json")]);
    assert_eq!(o.status.code(), Some(1));
    let o = kcurve(&["label", &fixture("canonical/segment_d1.json"), &fixture("invalid/syntax.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn csc_writes_the_semicircle() {
    let dir = tempfile::tempdir().unwrap();
    let (p, s) = out_path(&dir, "semi.json");
    let o = kcurve(&["csc", "--start", "0,0,0", "--end", "0,2,3.141592653589793", "-o", &s]);
    assert_eq!(o.status.code(), Some(0));
    let c = parse_curve(&fs::read(p).unwrap()).unwrap();
    assert!((c.total_length() - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn reduce_output_is_a_verified_trace() {
    let dir = tempfile::tempdir().unwrap();
    let (p, s) = out_path(&dir, "trace.json");
    let o = kcurve(&["reduce", &fixture("canonical/shorter_arc_d1.json"), "-o", &s]);
    assert_eq!(o.status.code(), Some(0));
    let t = parse_trace(&fs::read(&p).unwrap()).unwrap();
    assert!(verify_trace(&t).valid);
    assert!((t.last().total_length() - 1.0).abs() < 1e-6);
    assert_eq!(kcurve(&["verify-trace", &s]).status.code(), Some(0));
}

#[test]
fn homotope_joins_curves_of_one_class() {
    let dir = tempfile::tempdir().unwrap();
    let (p, s) = out_path(&dir, "h.json");
    let o = kcurve(&["homotope", &fixture("canonical/shorter_arc_d1.json"), &fixture("canonical/segment_d1.json"), "-o", &s]);
    assert_eq!(o.status.code(), Some(0));
    let t = parse_trace(&fs::read(p).unwrap()).unwrap();
    assert!(verify_trace(&t).valid);
}

#[test]
fn normalize_keeps_the_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let (p, s) = out_path(&dir, "n.json");
    let input = fixture("canonical/random_d1_s7.json");
    assert_eq!(kcurve(&["normalize", &input, "-o", &s]).status.code(), Some(0));
    let a = parse_curve(&fs::read(&input).unwrap()).unwrap();
    let b = parse_curve(&fs::read(p).unwrap()).unwrap();
    assert!(a.start_point().dist(b.start_point()) < 1e-9);
    assert!(a.end_point().dist(b.end_point()) < 1e-9);
    assert_eq!(kcurve(&["normalize", &input, "--lambda", "1.5"]).status.code(), Some(1));
}

#[test]
fn random_is_deterministic_per_seed() {
    let args = ["random", "--x", "0,0", "--y", "1,0", "--seed", "42"];
    let a = kcurve(&args);
    let b = kcurve(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let Curve::Cs(_) = parse_curve(&a.stdout).unwrap() else { panic!("expected a cs curve") };
    let c = kcurve(&["random", "--x", "0,0", "--y", "1,0", "--seed", "43"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let (p, s) = out_path(&dir, "c.svg");
    assert_eq!(kcurve(&["render", &fixture("canonical/semicircle.json"), "-o", &s]).status.code(), Some(0));
    let svg = fs::read_to_string(p).unwrap();
    assert!(svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
    let o = kcurve(&["render", &fixture("canonical/trace_shorter_arc_to_segment.json")]);
    assert_eq!(o.status.code(), Some(0));
    let frames = parse_trace(&fs::read(fixture("canonical/trace_shorter_arc_to_segment.json")).unwrap()).unwrap().len();
    assert_eq!(stdout(&o).matches("class=\"curve\"").count(), frames);
    let o = kcurve(&["render", "--x", "0,0", "--y", "1,0", "--regions"]);
    assert!(stdout(&o).contains("class=\"lens\""));
}

#[test]
fn error_categories_map_to_exit_codes() {
    assert_eq!(kcurve(&["verify", &fixture("invalid/kink.json")]).status.code(), Some(1));
    assert_eq!(kcurve(&["label", &fixture("invalid/unknown_field.json")]).status.code(), Some(2));
    assert_eq!(kcurve(&["label", &fixture("invalid/bad_kappa.json")]).status.code(), Some(2));
    assert_eq!(kcurve(&["label", &fixture("nowhere.json")]).status.code(), Some(2));
    assert_eq!(kcurve(&["csc", "--start", "0,0", "--end", "1,0,0"]).status.code(), Some(2));
    let o = kcurve(&["verify-trace", &fixture("canonical/segment_d1.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn writing_to_a_missing_directory_fails_with_io() {
    let o = kcurve(&["csc", "--start", "0,0,0", "--end", "1,0,0", "-o", "/nonexistent/dir/out.json"]);
    assert_eq!(o.status.code(), Some(2));
}
