use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_measure-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["examples", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    dir
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn examples_writes_fixtures_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["examples", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for f in [
        "fibonacci",
        "example1-7edge",
        "example1-9edge",
        "fullshift4",
        "fig3",
    ] {
        assert!(dir.path().join(format!("{f}.json")).exists(), "{f}");
    }
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    let fixtures_with_notes: Vec<&str> = v["discrepancies"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["fixture"].as_str().unwrap())
        .collect();
    for c in checks {
        if c["pass"] == false {
            assert!(
                fixtures_with_notes.contains(&c["fixture"].as_str().unwrap()),
                "{c}"
            );
        }
    }
}

#[test]
fn fixture_files_round_trip_through_validate() {
    let dir = fixtures();
    for f in [
        "fibonacci",
        "example1-7edge",
        "example1-9edge",
        "fullshift4",
        "fig3",
    ] {
        let out = run(&["validate", &path(dir.path(), &format!("{f}.json"))]);
        assert_eq!(out.status.code(), Some(0), "{f}");
        let v = json(&out);
        assert_eq!(v["primitivity"]["primitive"], true, "{f}");
    }
}

#[test]
fn classify_fibonacci_is_inconclusive() {
    let dir = fixtures();
    let out = run(&[
        "classify",
        &path(dir.path(), "fibonacci.json"),
        "--height",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kind"], "continuous");
    assert_eq!(v["evidence"], "inconclusive");
    assert!(v["evidence_detail"]["max_abs"].as_f64().unwrap() < 1e-6);
}

#[test]
fn atoms_of_seven_edge_fixture() {
    let dir = fixtures();
    let out = run(&["atoms", &path(dir.path(), "example1-7edge.json")]);
    let v = json(&out);
    assert_eq!(v["count"], 5);
    assert!((v["mass_total"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn limit_reports_value_and_bound() {
    let dir = fixtures();
    let csv = dir.path().join("limit.csv");
    let out = run(&[
        "limit",
        &path(dir.path(), "fig3.json"),
        "--z",
        "1",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["z"], serde_json::json!([1, 0]));
    assert!(v["bound"].as_f64().unwrap() < 1e-7);
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("t_or_z,re,im,abs,bound\n\"1,0\","));
}

#[test]
fn zero_automaton_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("za.json");
    let out = run(&[
        "zero-automaton",
        "--minpoly",
        "-1,-1,1",
        "--alphabet",
        "-1,0,1",
        "--trim",
        "both",
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_file).unwrap()).unwrap();
    assert_eq!(v["states"].as_array().unwrap().len(), 5);
    assert_eq!(v["edges"].as_array().unwrap().len(), 9);
    // The output is itself a valid automaton file with β attached.
    let out = run(&["atoms", out_file.to_str().unwrap()]);
    assert_eq!(json(&out)["count"], 5);
}

#[test]
fn cylinder_and_fourier() {
    let dir = fixtures();
    let fib = path(dir.path(), "fibonacci.json");
    let v = json(&run(&["cylinder", &fib, "--word", "1"]));
    assert!((v["measure"].as_f64().unwrap() - 0.276_393_2).abs() < 1e-7);
    let v = json(&run(&["cylinder", &fib, "--word", "1,1"]));
    assert_eq!(v["measure"], 0.0);

    let csv = dir.path().join("f.csv");
    let v = json(&run(&[
        "fourier",
        &path(dir.path(), "fullshift4.json"),
        "--t",
        "0.25,1",
        "--tol",
        "1e-10",
        "--csv",
        csv.to_str().unwrap(),
    ]));
    let abs = v["values"][0]["value"]["abs"].as_f64().unwrap();
    assert!((abs - 0.5731).abs() < 1e-4);
    let rows = std::fs::read_to_string(csv).unwrap();
    assert_eq!(rows.lines().count(), 3);
}

#[test]
fn cdf_and_cloud() {
    let dir = fixtures();
    let full = path(dir.path(), "fullshift4.json");
    let v = json(&run(&[
        "cdf",
        &full,
        "--depth",
        "12",
        "--points",
        "0.5,1.0,1.5",
    ]));
    let row = &v["cdf"][2];
    assert!(row["lower"].as_f64().unwrap() <= 0.5 && 0.5 <= row["upper"].as_f64().unwrap());

    let csv = dir.path().join("cloud.csv");
    let out = run(&[
        "cloud",
        &path(dir.path(), "fibonacci.json"),
        "--depth",
        "10",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("word,value,mass,lo,hi"));
    // Words without two consecutive 1s: F(12) = 144 of length 10.
    assert_eq!(lines.count(), 144);
}

#[test]
fn reports_are_stable_across_runs_and_jobs() {
    let dir = fixtures();
    let fig3 = path(dir.path(), "fig3.json");
    let a = run(&[
        "cdf",
        &fig3,
        "--points",
        "0.5,1,2",
        "--samples",
        "5000",
        "--seed",
        "4",
    ]);
    let b = run(&[
        "--jobs",
        "1",
        "cdf",
        &fig3,
        "--points",
        "0.5,1,2",
        "--samples",
        "5000",
        "--seed",
        "4",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["scan", &fig3, "--height", "1"]);
    let b = run(&["--jobs", "2", "scan", &fig3, "--height", "1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"alphabet":[0,1],"states":["p"],"edges":[{"from":"p","to":"p","label":5}]}"#,
    )
    .unwrap();
    assert_eq!(
        run(&["validate", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));

    let dir = fixtures();
    let out = bin()
        .args([
            "limit",
            &path(dir.path(), "fig3.json"),
            "--z",
            "1000000000000000000,-1000000000000000000",
        ])
        .env("MEASURE_LAB_PRECISION_CAP", "64")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    let no_beta = dir.path().join("nobeta.json");
    std::fs::write(
        &no_beta,
        r#"{"alphabet":[0,1],"states":["p"],"edges":[{"from":"p","to":"p","label":0},{"from":"p","to":"p","label":1}]}"#,
    )
    .unwrap();
    assert_eq!(
        run(&["classify", no_beta.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let v = json(&run(&[
        "classify",
        no_beta.to_str().unwrap(),
        "--minpoly",
        "-3,1",
    ]));
    assert_eq!(v["evidence"], "singular_by_dimension");
}
