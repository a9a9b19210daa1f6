//! End-to-end checks of the `fbp` binary: flags, exit codes and the layout
//! of the emitted files.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fbp"))
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fbp_cli_{name}_{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn no_arguments_prints_usage_and_exits_2() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(text.to_lowercase().contains("usage"), "stderr: {text}");
}

#[test]
fn unknown_flag_exits_2() {
    let out = bin().arg("--frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_run_writes_csv_and_summary() {
    let dir = scratch_dir("single");
    let out = bin()
        .args([
            "--test", "1",
            "--algorithm", "decoupled",
            "--degree", "2",
            "--mesh", "1",
            "--tol", "1e-10",
            "--out", dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(dir.join("test1_decoupled_1.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "iter,dirichlet_error,surface_error,update_norm,wall_time_s");
    assert!(lines.len() >= 2 && lines.len() <= 16, "{} rows", lines.len() - 1);

    // Summary final-error columns equal the last row of the per-run CSV.
    let summary = std::fs::read_to_string(dir.join("summary.csv")).unwrap();
    let last_run_row: Vec<&str> = lines.last().unwrap().split(',').collect();
    let summary_row: Vec<&str> = summary.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(summary_row[0], "1");
    assert_eq!(summary_row[1], "decoupled");
    assert_eq!(summary_row[5], "converged");
    assert_eq!(summary_row[7], last_run_row[1], "final dirichlet error");
    assert_eq!(summary_row[8], last_run_row[2], "final surface error");
    assert_eq!(summary_row[9], last_run_row[3], "final update norm");

    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn svg_and_geometry_dumps_are_written() {
    let dir = scratch_dir("extras");
    let out = bin()
        .args([
            "--test", "1",
            "--algorithm", "collocation",
            "--degree", "2",
            "--mesh", "4",
            "--svg",
            "--dump-geometry",
            "--out", dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(dir.join("test1_collocation_4.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("polyline"));
    let geo = std::fs::read_to_string(dir.join("test1_collocation_4.geo.txt")).unwrap();
    let mut lines = geo.lines();
    assert_eq!(lines.next().unwrap(), "2 2");
    assert_eq!(lines.next().unwrap(), "9 9");
    // Two knot lines plus one line per control point (6 x 6 grid).
    assert_eq!(geo.lines().count(), 4 + 36);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn error_columns_are_deterministic_across_runs() {
    let extract = |dir: &PathBuf| {
        let csv = std::fs::read_to_string(dir.join("test2_coupled_4.csv")).unwrap();
        csv.lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                format!("{},{},{},{}", f[0], f[1], f[2], f[3])
            })
            .collect::<Vec<_>>()
    };
    let mut results = Vec::new();
    for tag in ["det_a", "det_b"] {
        let dir = scratch_dir(tag);
        let out = bin()
            .args([
                "--test", "2",
                "--algorithm", "coupled",
                "--degree", "3",
                "--mesh", "4",
                "--out", dir.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        results.push(extract(&dir));
        let _ = std::fs::remove_dir_all(&dir);
    }
    assert_eq!(results[0], results[1]);
}

#[test]
fn parallel_jobs_produce_all_outputs() {
    let dir = scratch_dir("jobs");
    let out = bin()
        .args([
            "--test", "1",
            "--algorithm", "all",
            "--degree", "2",
            "--mesh", "1,4",
            "--jobs", "3",
            "--out", dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    for alg in ["coupled", "decoupled", "collocation"] {
        for mesh in ["1", "4"] {
            assert!(dir.join(format!("test1_{alg}_{mesh}.csv")).exists());
        }
    }
    let summary = std::fs::read_to_string(dir.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 7);
    let _ = std::fs::remove_dir_all(&dir);
}
