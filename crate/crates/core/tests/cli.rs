use std::path::Path;
use std::process::Command;

use mcp_distance::cli::{self, Format, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION_FAILED};
use mcp_distance::validate::ValidationSuite;
use mcp_distance::McpParams;

fn run(args: &[&str]) -> i32 {
    cli::run(std::iter::once("mcp-distance").chain(args.iter().copied()))
}

fn read_csv(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn cdf_table_shape_and_monotonicity() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cdf.csv");
    let args = [
        "cdf",
        "--lambda-p",
        "20e-6",
        "--m-bar",
        "30",
        "--r-d",
        "40",
        "--r-max",
        "160",
        "--points",
        "200",
        "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(run(&args), EXIT_OK);
    let (header, rows) = read_csv(&out);
    assert_eq!(header, "r,contact,nearest_neighbor,ppp");
    assert_eq!(rows.len(), 200);
    for col in 1..4 {
        assert!(rows
            .iter()
            .all(|r| r[col].is_finite() && (0.0..=1.0).contains(&r[col])));
        assert!(rows.windows(2).all(|w| w[1][col] >= w[0][col]));
    }
    let first = std::fs::read(&out).unwrap();
    assert_eq!(run(&args), EXIT_OK);
    assert_eq!(std::fs::read(&out).unwrap(), first);
}

#[test]
fn cdf_json_and_log_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cdf.json");
    let code = run(&[
        "cdf",
        "--log-grid",
        "--r-min",
        "1",
        "--r-max",
        "100",
        "--points",
        "5",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc["grid"].as_array().unwrap().len(), 5);
    assert_eq!(doc["series"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["cdf", "--points", "1"]), EXIT_USAGE);
    assert_eq!(run(&["cdf", "--log-grid"]), EXIT_USAGE);
    assert_eq!(run(&["cdf", "--r-d", "0"]), EXIT_USAGE);
    assert_eq!(run(&["cdf", "--tol", "0"]), EXIT_USAGE);
    assert_eq!(run(&["validate", "--points", "0"]), EXIT_USAGE);
    assert_eq!(run(&["validate", "--r-d", "80", "--r-d", "20"]), EXIT_USAGE);
    assert_eq!(run(&["simulate", "--samples", "0"]), EXIT_USAGE);
    assert_eq!(run(&["simulate", "--workers", "0"]), EXIT_USAGE);
}

#[test]
fn sweep_long_format_and_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let code = run(&[
        "sweep",
        "--quiet",
        "--r-d",
        "20",
        "--r-d",
        "40",
        "--r-d",
        "80",
        "--r-d",
        "40",
        "--points",
        "50",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let (header, rows) = read_csv(&out);
    assert_eq!(header, "r_d,r,contact,nearest_neighbor,ppp");
    assert_eq!(rows.len(), 3 * 50);
    let block = |k: usize| &rows[50 * k..50 * (k + 1)];
    assert_eq!(block(2)[0][0], 80.0);
    for k in 0..2 {
        for (small, large) in block(k).iter().zip(block(k + 1)) {
            assert!(large[2] >= small[2] - 1e-9);
            assert!(large[3] <= small[3] + 1e-9);
        }
    }
}

#[test]
fn simulate_writes_sidecar_and_raw_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.csv");
    let raw = dir.path().join("raw");
    let code = run(&[
        "simulate",
        "--quiet",
        "--samples",
        "500",
        "--points",
        "20",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
        "--raw",
        raw.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let (header, rows) = read_csv(&out);
    assert_eq!(header, "r,emp_contact,emp_nn");
    assert_eq!(rows.len(), 20);
    let meta: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("sim.csv.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["seed"], 3);
    assert_eq!(meta["n_samples"], 500);
    assert!(meta.get("workers").is_none());

    let contact = std::fs::read_to_string(dir.path().join("raw.contact.txt")).unwrap();
    assert_eq!(contact.lines().count(), 500);
    let censored = contact.lines().filter(|l| *l == "inf").count();
    assert_eq!(censored as u64, meta["censored_contact"].as_u64().unwrap());
    assert!(
        std::fs::metadata(dir.path().join("raw.nn.txt"))
            .unwrap()
            .len()
            > 0
    );
}

#[test]
fn sign_flipped_baseline_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let params = McpParams::new(20e-6, 30.0, 40.0).unwrap();
    let mut suite = ValidationSuite::new(params, 11);
    suite.simulation.n_samples = 2_000;
    suite.ks_threshold = 0.05;
    suite.ppp_baseline = |density, r| -(density * std::f64::consts::PI * r * r).exp_m1();
    let code = cli::run_validate_suite(&suite, Some(&out), Format::Json).unwrap();
    assert_eq!(code, EXIT_VALIDATION_FAILED);

    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    let violations = report["dominance"][0]["violations"].as_array().unwrap();
    assert!(!violations.is_empty());
    assert_eq!(violations[0]["kind"], "ppp_over_contact");
    assert!(violations[0]["r"].as_f64().unwrap() > 0.0);
}

#[test]
fn binary_runs_validation_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_mcp-distance"))
        .args([
            "validate",
            "--samples",
            "10000",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("check,value,threshold,passed\n"));
    assert!(text.ends_with("all,0,,true\n"));

    let status = Command::new(env!("CARGO_BIN_EXE_mcp-distance"))
        .args(["cdf", "--points", "1"])
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_USAGE));
}
