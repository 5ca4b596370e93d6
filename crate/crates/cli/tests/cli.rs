use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use surfrep::attainable::{saturate_window, AttainableSetDescription};
use surfrep::instances::handlebody;
use surfrep::pipeline::{run_attainable, BoundSource, PipelineOptions};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn surfrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surfrep"))
        .args(args)
        .env_remove("GENUS_THREADS")
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_surfrep"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(o));
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn validate_exit_codes() {
    let ok = surfrep(&["validate", data("handlebody.cx").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("3 2-cells"));

    let bad = surfrep(&["validate", data("mismatch.cx").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("not a closed edge path"), "{}", stderr(&bad));

    let missing = surfrep(&["validate", data("no-such-file.cx").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));

    let garbage = with_stdin(&["validate", "-"], "((p)");
    assert_eq!(garbage.status.code(), Some(1));
}

#[test]
fn generated_text_reads_back_from_stdin() {
    for name in ["@handlebody", "@three-octagons", "@hypercube:3"] {
        let text = stdout(&surfrep(&["gen", name]));
        let o = with_stdin(&["validate", "-"], &text);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
    }
}

#[test]
fn three_octagons_attainable() {
    let d = json(&surfrep(&["attainable", "@three-octagons", "--format", "json"]));
    assert_eq!(d["minima"], serde_json::json!([[6, 6], [8, 5]]));
    assert_eq!(d["certified"], Value::Bool(true));
    assert_eq!(d["n0"], 1);
}

#[test]
fn handlebody_with_degree_bound_matches_library() {
    let out = json(&surfrep(&[
        "attainable",
        data("handlebody.cx").to_str().unwrap(),
        "--class",
        "X=1,Y=1,Z=1",
        "--max-degree",
        "6",
        "--format",
        "json",
    ]));
    let cli: AttainableSetDescription = serde_json::from_value(out).unwrap();
    let (c, alpha) = handlebody();
    let lib = run_attainable(&c, &alpha.coefficients, &BoundSource::MaxDegree(6), &PipelineOptions::default())
        .unwrap()
        .description;
    assert_eq!(cli, lib);
    assert!(!cli.certified);
    assert_eq!(cli.bound_used, 6);
}

#[test]
fn empty_class_is_sphere_case() {
    let d = json(&surfrep(&["attainable", "@handlebody", "--class", "", "--format", "json"]));
    assert_eq!(d["sphere_case"], Value::Bool(true));
    assert_eq!(d["minima"], serde_json::json!([[0, 0]]));
}

#[test]
fn json_is_stable_across_threads_and_pruning() {
    let run = |extra: &[&str]| {
        let mut args = vec!["enumerate", "@handlebody", "--max-degree", "5", "--format", "json"];
        args.extend_from_slice(extra);
        json(&surfrep(&args))
    };
    let one = run(&["--threads", "1"]);
    let four = run(&["--threads", "4"]);
    assert_eq!(one, four);
    let points = |v: &Value| v["points"].clone();
    assert_eq!(points(&one), points(&run(&["--no-prune"])));

    let a = surfrep(&["attainable", "@three-octagons", "--format", "json", "--threads", "3"]);
    let b = surfrep(&["attainable", "@three-octagons", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn render_reads_attainable_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("octagons.json");
    let o = surfrep(&["attainable", "@three-octagons", "--format", "json"]);
    std::fs::write(&path, &o.stdout).unwrap();
    let d: AttainableSetDescription = serde_json::from_slice(&o.stdout).unwrap();
    let expected = saturate_window(&d, 14, 9).len();

    let p = path.to_str().unwrap();
    let grid = stdout(&surfrep(&["render", p, "--window", "14x9"]));
    let crosses: usize = grid.lines().skip(1).take(10).map(|l| l.matches('x').count()).sum();
    assert_eq!(crosses, expected);

    let svg = stdout(&surfrep(&["render", p, "--window", "14x9", "--format", "svg"]));
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches(r#"class="cross""#).count(), expected);

    let bad = surfrep(&["render", p, "--window", "14-9"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn bound_flags() {
    let none = surfrep(&["attainable", "@handlebody"]);
    assert_eq!(none.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("oct.w");
    std::fs::write(&w, surfrep(&["gen", "@three-octagons", "--emit", "weights"]).stdout).unwrap();
    let both = surfrep(&["attainable", "@three-octagons", "--weights", w.to_str().unwrap(), "--max-degree", "4"]);
    assert_eq!(both.status.code(), Some(2));

    let small = surfrep(&["attainable", "@handlebody", "--max-degree", "2"]);
    assert_eq!(small.status.code(), Some(1));
}

#[test]
fn invalid_weights_are_a_domain_error() {
    let text = stdout(&surfrep(&["gen", "@three-octagons", "--emit", "weights"]));
    let heavy: String = text
        .lines()
        .map(|l| format!("{} = 1\n", l.split('=').next().unwrap().trim()))
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("heavy.w");
    std::fs::write(&w, heavy).unwrap();
    let w = w.to_str().unwrap();

    let check = surfrep(&["weights", "@three-octagons", "--weights", w]);
    assert_eq!(check.status.code(), Some(1));
    assert!(stderr(&check).contains("valid: false"));

    let run = surfrep(&["attainable", "@three-octagons", "--weights", w]);
    assert_eq!(run.status.code(), Some(1));
    assert!(stderr(&run).contains("non_negative_euler"), "{}", stderr(&run));

    let good = surfrep(&["weights", "@three-octagons", "--format", "json"]);
    assert_eq!(json(&good)["valid"], Value::Bool(true));
}

#[test]
fn lpq_values() {
    let v = |p: &str, q: &str| stdout(&surfrep(&["lpq", "@three-octagons", "--p", p, "--q", q])).trim().to_string();
    // minima (6,6), (8,5); the ceiling ray starts at (8,5)
    assert_eq!(v("1", "0"), "6");
    assert_eq!(v("0", "1"), "5");
    assert_eq!(v("-1", "3"), "7");
    assert_eq!(v("1/2", "1"), "9");
    assert_eq!(v("1", "-1"), "infinite");
    assert_eq!(v("-1", "1"), "infinite");
}

#[test]
fn homology_and_witnesses() {
    let h = json(&surfrep(&["homology", "@hypercube:3", "--format", "json"]));
    assert_eq!(h["rank"], 3);

    let cycle = surfrep(&["homology", "@handlebody", "--class", "X=1"]);
    assert_eq!(stdout(&cycle).trim(), "cycle: X=1");
    // a disk spanning a single loop has boundary a ≠ 0
    let disk = "((p),((a,(p,p))),((D,(1,0,+),(a))))";
    let not_cycle = with_stdin(&["homology", "-", "--class", "D=1"], disk);
    assert_eq!(not_cycle.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let e = surfrep(&[
        "enumerate",
        "@handlebody",
        "--max-degree",
        "3",
        "--witness-out",
        out.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let e = json(&e);
    let witnesses: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(witnesses.as_array().unwrap().len(), e["points"].as_array().unwrap().len());
}

#[test]
fn stable_rows() {
    let r = json(&surfrep(&["stable", "@three-octagons", "--n", "1", "--format", "json"]));
    assert_eq!(r["rows"][0]["chi_minus"], 6);
    assert_eq!(r["rows"][0]["genus"], 5);
}
