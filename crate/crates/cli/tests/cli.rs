use std::path::Path;
use std::process::{Command, Output};

use ar1_tstat_cli::manifest::RunManifest;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_ar1-tstat");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("AR1_TSTAT_WORKERS")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn table_moments_rows() {
    let out = run(&["table-moments", "--grid-n", "5,2", "--grid-rho", "0,0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 13);
    assert_eq!(header[0], "n");
    assert_eq!(header[12], "discrepancy_flag");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);

    let iid = &rows[0];
    assert_eq!(iid[0], "5");
    assert_eq!(iid[3].parse::<f64>().unwrap(), 1.0);
    assert_eq!(iid[5].parse::<f64>().unwrap(), 1.0);
    assert!((iid[9].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
    assert!(iid[11].parse::<f64>().unwrap() < 1e-12);
    assert_eq!(iid[12], "false");

    let two = &rows[3];
    assert_eq!((two[0], two[1].parse::<f64>().unwrap()), ("2", 0.5));
    assert!((two[3].parse::<f64>().unwrap() - 2.0).abs() < 1e-12);
    assert!((two[5].parse::<f64>().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!((two[10].parse::<f64>().unwrap() - 8.0 / 9.0).abs() < 1e-12);
}

#[test]
fn table_moments_accepts_ranges_and_json() {
    let out = run(&[
        "table-moments",
        "--grid-n",
        "2:10:4",
        "--grid-rho",
        "-0.5:0.5:0.5",
        "--sigma",
        "1,2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 3 * 3 * 2);
}

#[test]
fn invalid_input_exits_with_two() {
    let out = run(&["table-moments", "--grid-rho", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stationarity bound"));
    assert_eq!(run(&["table-moments", "--grid-n", "2,,3"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--n", "5", "--rho", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--n", "5", "--workers", "0"]).status.code(), Some(2));
    assert_eq!(
        run(&["simulate", "--n", "5", "--functional", "median"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["density", "student", "--dof", "0"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_error() {
    let out = run(&[
        "simulate",
        "--n",
        "5",
        "--reps",
        "10",
        "--out",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn verify_small_grid() {
    let start = std::time::Instant::now();
    let out = run(&["verify", "--grid", "small"]);
    assert!(start.elapsed().as_secs_f64() < 10.0);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    for c in report["identities"].as_array().unwrap() {
        assert_eq!(c["passed"], true, "{}", c["name"]);
        assert!(c["max_gap"].as_f64().is_some());
    }
    assert!(!report["discrepancies"]["flagged"].as_array().unwrap().is_empty());
}

#[test]
fn verify_with_impossible_tolerance_fails() {
    let out = run(&["verify", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
    let failing: Vec<&Value> = report["identities"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|c| !c["failures"].as_array().unwrap().is_empty()));
}

#[test]
fn simulate_writes_outputs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.json");
    let values = dir.path().join("values.csv");
    let status = run(&[
        "simulate",
        "--n",
        "8",
        "--rho",
        "0.3",
        "--mu",
        "1.5",
        "--reps",
        "3000",
        "--seed",
        "5",
        "--functional",
        "s2",
        "--format",
        "json",
        "--out",
        path_str(&out),
        "--values",
        path_str(&values),
    ]);
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());

    let report: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(report["functional"], "s2");
    assert_eq!(report["summary"]["replications"], 3000);
    let p = report["ks"]["p_value"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&p));

    let text = std::fs::read_to_string(&values).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "replication,value");
    assert_eq!(lines.len(), 3001);
    assert!(lines[1].starts_with("1,"));

    let manifest = RunManifest::read(&dir.path().join("sim.json.manifest.json")).unwrap();
    assert_eq!(manifest.command, "simulate");
    assert_eq!(manifest.seed, Some(5));
    assert_eq!(manifest.replications, Some(3000));
    assert_eq!(manifest.params.unwrap().mu(), 1.5);
    assert_eq!(manifest.outputs.len(), 2);
    assert!(manifest.outputs.iter().all(|p| p.exists()));
    assert!(chrono::DateTime::parse_from_rfc3339(&manifest.timestamp).is_ok());
}

#[test]
fn worker_environment_variable_is_a_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.csv");
    let args = ["simulate", "--n", "6", "--reps", "500", "--out", path_str(&out)];
    let status = Command::new(BIN)
        .args(args)
        .env("AR1_TSTAT_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    let m = RunManifest::read(&dir.path().join("a.csv.manifest.json")).unwrap();
    assert_eq!(m.workers, 3);

    let status = Command::new(BIN)
        .args(args)
        .args(["--workers", "2"])
        .env("AR1_TSTAT_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    let m = RunManifest::read(&dir.path().join("a.csv.manifest.json")).unwrap();
    assert_eq!(m.workers, 2);
}

#[test]
fn rerun_reproduces_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    assert_eq!(
        run(&["table-moments", "--grid-n", "3,7", "--out", path_str(&out)])
            .status
            .code(),
        Some(0)
    );
    let first = std::fs::read(&out).unwrap();
    std::fs::remove_file(&out).unwrap();
    let manifest = dir.path().join("t.csv.manifest.json");
    assert_eq!(
        run(&["rerun", "--manifest", path_str(&manifest)]).status.code(),
        Some(0)
    );
    assert_eq!(std::fs::read(&out).unwrap(), first);
    assert_eq!(
        run(&["rerun", "--manifest", "/nonexistent.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn student_density_columns() {
    let out = run(&["density", "student", "--dof", "1", "--t-grid", "-2:2:1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,pdf_closed,pdf_integral");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    assert!((rows[2][1] - std::f64::consts::FRAC_1_PI).abs() < 1e-15);

    let out = run(&["density", "student", "--dof", "5"]);
    let text = stdout(&out);
    for l in text.lines().skip(1) {
        let r: Vec<f64> = l.split(',').map(|f| f.parse().unwrap()).collect();
        assert!((r[1] - r[2]).abs() < 1e-8);
    }
}

#[test]
fn simulated_density_tracks_student() {
    let out = run(&[
        "density",
        "simulated",
        "--n",
        "10",
        "--rho",
        "0.5",
        "--reps",
        "200000",
        "--seed",
        "3",
        "--t-grid",
        "-4:4:0.25",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,kde");
    let law = ar1_tstat::StudentLaw::new(9.0).unwrap();
    for l in lines {
        let r: Vec<f64> = l.split(',').map(|f| f.parse().unwrap()).collect();
        assert!((r[1] - law.density_closed(r[0])).abs() < 0.01, "t = {}", r[0]);
    }
}
