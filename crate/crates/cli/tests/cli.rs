use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_friedrichs-lab"))
        .args(args)
        .current_dir(dir)
        .env("FRIEDRICHS_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn factors_on_the_hartogs_model_have_three_nonzero_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["factors", "--space", "hartogs", "--range", "-3..3"], dir.path());
    assert!(out.status.success());
    let rows = json(&out)["result"].as_array().unwrap().clone();
    let nonzero: Vec<(i64, f64)> = rows
        .iter()
        .filter(|r| r["factor"].as_f64().unwrap() != 0.0)
        .map(|r| (r["degree"].as_i64().unwrap(), r["factor"].as_f64().unwrap()))
        .collect();
    assert_eq!(nonzero.len(), 3);
    for ((d, v), (wd, wv)) in nonzero.iter().zip([(-1, 0.5), (0, 1.0), (1, 1.5)]) {
        assert_eq!(*d, wd);
        assert!((v - wv).abs() < 1e-12);
    }
}

#[test]
fn thresholds_for_the_first_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["thresholds", "--n", "1", "--eta", "0.5"], dir.path());
    assert!(out.status.success());
    let r = &json(&out)["result"];
    assert!((r["epsilon_main"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert!((r["p_upper_case1"].as_f64().unwrap() - 8.0 / 3.0).abs() < 1e-15);
    assert!((r["sobolev_upper"].as_f64().unwrap() - 0.125).abs() < 1e-15);
}

#[test]
fn probe_reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "probe",
        "--q",
        "2",
        "--p",
        "3",
        "--truncation",
        "3",
        "--trials",
        "6",
        "--seed",
        "17",
    ];
    let a = run(&[&args[..], &["--out", "a.json"]].concat(), dir.path());
    let b = run(&[&args[..], &["--out", "a2.json"]].concat(), dir.path());
    assert!(a.status.success() && b.status.success());
    let read = |n: &str| std::fs::read_to_string(dir.path().join(n)).unwrap();
    // Only the echoed output path differs.
    assert_eq!(
        read("a.json").replace("a.json", "X"),
        read("a2.json").replace("a2.json", "X")
    );
}

#[test]
fn config_file_supplies_keys_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.json"),
        r#"{"command": "spectrum", "space": "exp-hartogs", "truncation": 4}"#,
    )
    .unwrap();
    let out = run(&["--config", "run.json", "spectrum", "--truncation", "2"], dir.path());
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["provenance"]["config"]["space"], "exp-hartogs");
    assert_eq!(v["result"]["truncation"], 2);
    assert_eq!(v["result"]["rank_estimate"], "infinite within truncation");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Randomized commands need a seed.
    let out = run(&["probe", "--q", "2", "--p", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
    std::fs::write(dir.path().join("bad.json"), r#"{"trunc": 3}"#).unwrap();
    let out = run(&["--config", "bad.json", "spectrum"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`trunc`"));
    let out = run(&["apply", "--input", "missing.txt", "--mode", "f"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    // An unreachable tolerance leaves the quadrature unconverged.
    let out = run(&["itilde", "--x", "3", "--tol", "1e-300"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn apply_round_trips_through_series_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("in.txt"), "1 1.0 0.0\n").unwrap();
    let out = run(
        &["apply", "--input", "in.txt", "--mode", "f", "--out", "fz.txt"],
        dir.path(),
    );
    assert!(out.status.success());
    let out = run(
        &["apply", "--input", "fz.txt", "--mode", "f", "--out", "f2z.txt"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("f2z.txt")).unwrap();
    let s = friedrichs_lab::LaurentSeries64::from_text(&text).unwrap();
    assert!((s.coefficient(1).re - 0.75).abs() < 1e-12);
    assert_eq!(s.len(), 1);
}

#[test]
fn bergman_mode_agrees_with_the_factor_map() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("in.txt"), "-1 0.5 0.25\n2 -1.0 0.0\n").unwrap();
    let f = run(
        &["apply", "--input", "in.txt", "--mode", "f", "--format", "json"],
        dir.path(),
    );
    let b = run(
        &[
            "apply",
            "--input",
            "in.txt",
            "--mode",
            "b",
            "--format",
            "json",
            "--truncation",
            "3",
        ],
        dir.path(),
    );
    assert!(f.status.success() && b.status.success());
    let fs: friedrichs_lab::LaurentSeries64 = serde_json::from_value(json(&f)["result"]["series"].clone()).unwrap();
    let bs: friedrichs_lab::LaurentSeries64 = serde_json::from_value(json(&b)["result"]["series"].clone()).unwrap();
    assert!(fs.max_abs_diff(&bs) < 1e-8, "{fs} vs {bs}");
}

#[test]
fn counterexample_csv_and_series_sum() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["counterexample", "--p", "3", "--cutoffs", "0.125,0.0625,0.03125"],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("cutoff,l2,lp"));
    let out = run(
        &["series-sum", "--kind", "s", "--p", "4", "--k", "30", "--format", "csv"],
        dir.path(),
    );
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 32);
    let out = run(&["series-sum", "--kind", "f2h", "--p", "4"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_subset_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--suite", "3,5,11", "--out", "verify.json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    let results = v["result"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    assert!(results.iter().all(|r| r["passed"] == true));
    let out = run(&["verify", "--suite", "13"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
