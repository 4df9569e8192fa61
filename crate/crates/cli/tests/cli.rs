use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgnlab"))
        .env("PGNLAB_OUT_DIR", dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad stdout ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("machine-readable error")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const FAMILY_A: [&str; 10] = [
    "--family",
    "A",
    "-n",
    "3",
    "--omega-hat",
    "5",
    "-a",
    "1/2",
    "--q0",
    "6",
];

#[test]
fn build_family_a_writes_system() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["build"];
    args.extend(FAMILY_A);
    let out = run(dir.path(), &args);
    assert_eq!(out.status.code(), Some(0));
    let summary = stdout_json(&out);
    let points: Vec<&str> = summary["division_points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(points, ["6/1", "7/1", "7/1", "9/1", "9/1", "11/1", "12/1"]);
    let file = read_json(&dir.path().join("system.json"));
    assert_eq!(file["schema_version"], 1);
    assert_eq!(file["validation"]["valid"], true);
}

#[test]
fn build_family_b_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["build", "--family", "B", "-n", "3", "--defaults"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["dilation_factor"], "3/1");
}

#[test]
fn invalid_parameters_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "build",
            "--family",
            "A",
            "-n",
            "2",
            "-a",
            "1/2",
            "--omega-hat",
            "4",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "invalid_params");
    assert!(!dir.path().join("system.json").exists());

    // decimals are not fractions
    let out = run(
        dir.path(),
        &[
            "build",
            "--family",
            "A",
            "-n",
            "3",
            "-a",
            "0.5",
            "--omega-hat",
            "5",
        ],
    );
    assert_eq!(out.status.code(), Some(2));

    let out = run(dir.path(), &["build", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["schema_version"], 1);
}

#[test]
fn exponents_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["exponents"];
    args.extend(FAMILY_A);
    let out = run(dir.path(), &args);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    assert_eq!(
        r["profile"]["omega_hat"],
        serde_json::json!(["2/5", "4/3", "5/1"])
    );
    assert_eq!(r["passed"], true);
    assert_eq!(read_json(&dir.path().join("exponents.json")), r);

    let out = run(
        dir.path(),
        &["exponents", "--family", "A", "-n", "2", "--omega-hat", "4"],
    );
    let r = stdout_json(&out);
    let eq = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"].as_str().unwrap().starts_with("jarnik equality"))
        .unwrap();
    assert_eq!(eq["slack"], "0/1");

    let out = run(
        dir.path(),
        &["exponents", "--family", "B", "-n", "3", "--defaults"],
    );
    let r = stdout_json(&out);
    assert_eq!(r["profile"]["omega_hat"][2], "7/1");
    let german: Vec<&Value> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["name"].as_str().unwrap().starts_with("german"))
        .collect();
    assert_eq!(german.len(), 2);
    assert!(german.iter().all(|c| c["holds"] == true));
    // printed-formula mismatches are findings and do not fail the run
    assert!(r["crosscheck"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e["matches"] == false));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn infinite_variant_reports_limits() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "exponents",
            "--family",
            "A",
            "-n",
            "3",
            "--omega-hat",
            "inf",
            "-a",
            "1/2",
            "--q0",
            "12",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    assert_eq!(r["profile"]["omega_hat"][2], "inf");
    assert_eq!(
        r["p1_max_per_period"]["values"].as_array().unwrap().len(),
        8
    );
    assert_eq!(r["p1_max_per_period"]["trend"], "decreasing");
}

#[test]
fn round_trip_matches_in_memory_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    for family in [
        &FAMILY_A[..],
        &["--family", "B", "-n", "4", "--defaults"][..],
    ] {
        let mut build = vec!["build", "--out", "sys.json"];
        build.extend(family);
        assert_eq!(run(dir.path(), &build).status.code(), Some(0));

        let mut direct = vec!["exponents", "--out", "direct.json"];
        direct.extend(family);
        let direct = stdout_json(&run(dir.path(), &direct));
        let file = dir.path().join("sys.json");
        let loaded = stdout_json(&run(
            dir.path(),
            &[
                "exponents",
                "--out",
                "loaded.json",
                "--system",
                file.to_str().unwrap(),
            ],
        ));
        assert_eq!(direct, loaded);
    }
}

#[test]
fn missing_or_corrupt_system_file_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["exponents", "--system", "/nonexistent/sys.json"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"]["kind"], "io");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"system\": 3}").unwrap();
    let out = run(
        dir.path(),
        &["exponents", "--system", bad.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn plot_markers_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["plot"];
    args.extend(FAMILY_A);
    let r = stdout_json(&run(dir.path(), &args));
    assert_eq!(r["polylines"], 4);
    assert_eq!(r["markers"]["switch"], 2);
    let svg = std::fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 4);
    assert_eq!(svg.matches("class=\"switch\"").count(), 2);
    let csv = std::fs::read_to_string(dir.path().join("plot.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 7);

    let r = stdout_json(&run(
        dir.path(),
        &[
            "plot",
            "--family",
            "B",
            "-n",
            "3",
            "--defaults",
            "--format",
            "csv",
        ],
    ));
    assert_eq!(r["markers"]["ordinary"], 6);
    assert_eq!(r["markers"]["switch"], 1);

    let mut empty = args.clone();
    empty.extend(["--from", "8", "--to", "8"]);
    assert_eq!(run(dir.path(), &empty).status.code(), Some(2));
    let mut outside = args;
    outside.extend(["--from", "1", "--to", "8"]);
    assert_eq!(run(dir.path(), &outside).status.code(), Some(2));
}

#[test]
fn jacobian_full_rank() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "jacobian",
            "--map",
            "W",
            "-n",
            "3",
            "--defaults",
            "--h",
            "1/1024",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    assert_eq!(r["rank"], 3);
    assert_eq!(r["full_rank"], true);
    assert_eq!(read_json(&dir.path().join("jacobian.json"))["rank"], 3);
}

#[test]
fn oracle_trajectory_and_insufficient_radius() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["oracle", "--cf", "[1;1,1,1,...]", "--qmax", "12"],
    );
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    assert_eq!(r["monotone"], true);
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let l1: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(l1.len(), 49);
    assert!(l1.windows(2).all(|w| w[1] >= w[0]));

    let out = run(
        dir.path(),
        &[
            "oracle",
            "--direction",
            "1,1.189207115002721,1.4142135623730951,1.681792830507429",
            "--qmax",
            "8",
            "--radius",
            "2",
        ],
    );
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_json(&out)["error"]["kind"], "oracle_insufficient");
}
