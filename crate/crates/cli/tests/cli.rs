use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use twistor_cm::{emit_report, run_survey, Format, RunConfig, ScenarioSpec, SurveyReport};

const BIN: &str = env!("CARGO_BIN_EXE_twistor-cm");

fn scenario(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(format!("{name}.toml"));
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("TWISTOR_CM_PRECISION_CAP").output().unwrap()
}

fn survey(path: &Path, extra: &[&str]) -> Output {
    let mut a = vec!["survey", "--scenario", path.to_str().unwrap()];
    a.extend_from_slice(extra);
    run(&a)
}

#[test]
fn bad_scenarios_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown_key", "preset = \"gaussian\"\nd = 2\nheight = 1\ncolour = 3\n"),
        ("float_d", "preset = \"gaussian\"\nd = 2.5\nheight = 1\n"),
        ("negative_d", "preset = \"gaussian\"\nd = -1\nheight = 1\n"),
        ("no_classes", "preset = \"gaussian\"\nd = 2\n"),
        ("bad_preset", "preset = \"zeta7\"\nd = 2\nheight = 1\n"),
        ("not_toml", "preset = \n"),
    ];
    for (name, body) in cases {
        let p = scenario(dir.path(), name, body);
        let out = survey(&p, &[]);
        assert_eq!(out.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = survey(&dir.path().join("missing.toml"), &[]);
    assert_eq!(out.status.code(), Some(2));
    let p = scenario(dir.path(), "ok", "preset = \"gaussian\"\nd = 2\nheight = 1\n");
    assert_eq!(survey(&p, &["--check", "nonsense"]).status.code(), Some(2));
    assert_eq!(survey(&p, &["--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn height_zero_is_an_empty_clean_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario(dir.path(), "empty", "preset = \"gaussian\"\nd = 2\nheight = 0\n");
    let out = survey(&p, &["--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r: SurveyReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r.records.is_empty());
    assert_eq!(r.summary.alarms, 0);
}

#[test]
fn json_round_trip_and_keys() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario(dir.path(), "g", "name = \"g\"\npreset = \"gaussian\"\nd = 2\nheight = 1\n");
    let out = survey(&p, &["--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys, ["records", "scenario", "structure", "summary"]);
    let r: SurveyReport = serde_json::from_value(v).unwrap();
    let again = emit_report(&r, Format::Json);
    assert_eq!(again.as_bytes(), &out.stdout[..]);
    assert!(r.records.iter().all(|x| x.timing_ms.is_none()));
}

#[test]
fn csv_rows_have_constant_width() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario(dir.path(), "z", "preset = \"zeta8\"\nd = 2\nheight = 1\nchecks = [\"picard\"]\n");
    let out = survey(&p, &["--format", "csv"]);
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(&out.stdout[..]);
    let width = rd.headers().unwrap().len();
    assert_eq!(width, 5 + 4);
    let mut n = 0;
    for row in rd.records() {
        assert_eq!(row.unwrap().len(), width);
        n += 1;
    }
    assert!(n > 0);
}

#[test]
fn output_is_deterministic_and_independent_of_workers() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario(dir.path(), "e", "preset = \"eisenstein\"\nd = 4\nheight = 2\n");
    let a = survey(&p, &["--format", "json"]);
    let b = survey(&p, &["--format", "json"]);
    let c = survey(&p, &["--format", "json", "--workers", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let out = dir.path().join("r.txt");
    let d = survey(&p, &["--out", out.to_str().unwrap()]);
    assert_eq!(d.status.code(), a.status.code());
    assert!(std::fs::read_to_string(out).unwrap().contains("classes"));
}

#[test]
fn explicit_classes_are_kept_with_in_band_errors() {
    let spec = ScenarioSpec::parse("preset = \"gaussian\"\nd = 2\nclasses = [[0, 0, 1], [1, 0], [0, 0, 0]]\n").unwrap();
    let r = run_survey(&spec, &RunConfig::default()).unwrap();
    assert_eq!(r.records.len(), 3);
    assert_eq!(r.records[0].location, "pole");
    assert!(r.records[1].error.is_some());
    assert!(r.records[2].error.is_some());
    assert_eq!(r.summary.errors, 2);
}

#[test]
fn r4_fibres_raise_alarms() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario(dir.path(), "z5", "preset = \"zeta5\"\nd = 2\nheight = 1\nchecks = [\"cm\"]\n");
    let out = survey(&p, &["--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let r: SurveyReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r.summary.cm_fail > 0);
    assert_eq!(r.summary.cm_pass, 0);
}

#[test]
fn verify_and_fields() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario(dir.path(), "g", "preset = \"zeta12\"\nd = 1\nheight = 1\n");
    let out = run(&["verify", "--scenario", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("invariants: ok"));
    let out = run(&["fields"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 5);
    assert_eq!(run(&["fields", "--preset", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
