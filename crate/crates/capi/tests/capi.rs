//! Exercises the C ABI through the exported symbols, the way a foreign
//! binding would, and keeps the committed header in sync with cbindgen.

use std::ffi::{CStr, CString};
use std::ptr;

use fbp_capi::*;

#[test]
fn benchmark_solve_and_query_roundtrip() {
    unsafe {
        let mut problem: *mut FbpProblem = ptr::null_mut();
        assert_eq!(fbp_problem_benchmark(1, &mut problem), FbpStatus::Ok);
        assert!(!problem.is_null());

        let mut opts = std::mem::zeroed::<FbpSolverOptions>();
        fbp_solver_options_default(&mut opts);
        assert_eq!(opts.degree, 3);
        opts.degree = 2;
        opts.mesh_x = 4;
        opts.mesh_y = 4;
        opts.algorithm = FbpAlgorithm::Collocation;

        let mut history: *mut FbpHistory = ptr::null_mut();
        assert_eq!(fbp_solve(problem, &opts, &mut history), FbpStatus::Ok);
        assert_eq!(fbp_history_status(history), FbpRunStatus::Converged);

        let len = fbp_history_len(history);
        assert!((1..=15).contains(&len));
        let mut rec = std::mem::zeroed::<FbpIteration>();
        assert_eq!(fbp_history_record(history, len - 1, &mut rec), FbpStatus::Ok);
        assert!(rec.dirichlet_error <= 1e-10);
        assert!(rec.surface_error <= 1e-10);

        // The converged boundary approximates 1 + x(1-x)/4.
        let mut height = 0.0f64;
        assert_eq!(
            fbp_history_boundary_height(history, 0.5, &mut height),
            FbpStatus::Ok
        );
        assert!((height - 1.0625).abs() < 1e-9, "height {height}");

        // Out-of-range record access reports a message.
        assert_eq!(
            fbp_history_record(history, len + 5, &mut rec),
            FbpStatus::InvalidArgument
        );
        let mut buf = [0i8; 256];
        let n = fbp_last_error_message(buf.as_mut_ptr(), buf.len());
        assert!(n > 0);
        let msg = CStr::from_ptr(buf.as_ptr()).to_string_lossy();
        assert!(msg.contains("out of range"), "message: {msg}");

        fbp_history_free(history);
        fbp_problem_free(problem);
    }
}

#[test]
fn csv_export_matches_core_schema() {
    unsafe {
        let mut problem: *mut FbpProblem = ptr::null_mut();
        assert_eq!(fbp_problem_benchmark(2, &mut problem), FbpStatus::Ok);
        let mut opts = std::mem::zeroed::<FbpSolverOptions>();
        fbp_solver_options_default(&mut opts);
        opts.mesh_x = 4;
        opts.mesh_y = 4;
        let mut history: *mut FbpHistory = ptr::null_mut();
        assert_eq!(fbp_solve(problem, &opts, &mut history), FbpStatus::Ok);

        let path = std::env::temp_dir().join(format!("fbp_capi_{}.csv", std::process::id()));
        let c_path = CString::new(path.to_str().unwrap()).unwrap();
        assert_eq!(fbp_history_write_csv(history, c_path.as_ptr()), FbpStatus::Ok);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("iter,dirichlet_error,surface_error,update_norm,wall_time_s"));
        assert_eq!(text.lines().count(), fbp_history_len(history) + 1);
        let _ = std::fs::remove_file(&path);

        fbp_history_free(history);
        fbp_problem_free(problem);
    }
}

#[test]
fn null_and_invalid_arguments_are_reported() {
    unsafe {
        assert_eq!(
            fbp_problem_benchmark(7, &mut ptr::null_mut()),
            FbpStatus::InvalidArgument
        );
        assert_eq!(fbp_problem_benchmark(1, ptr::null_mut()), FbpStatus::NullArgument);
        assert_eq!(
            fbp_solve(ptr::null(), ptr::null(), ptr::null_mut()),
            FbpStatus::NullArgument
        );
        assert_eq!(fbp_history_len(ptr::null()), 0);
        assert_eq!(fbp_history_status(ptr::null()), FbpRunStatus::Failed);
        // Frees tolerate null.
        fbp_problem_free(ptr::null_mut());
        fbp_history_free(ptr::null_mut());

        // Invalid options surface the core error.
        let mut problem: *mut FbpProblem = ptr::null_mut();
        assert_eq!(fbp_problem_benchmark(1, &mut problem), FbpStatus::Ok);
        let mut opts = std::mem::zeroed::<FbpSolverOptions>();
        fbp_solver_options_default(&mut opts);
        opts.degree = 1;
        let mut history: *mut FbpHistory = ptr::null_mut();
        assert_eq!(
            fbp_solve(problem, &opts, &mut history),
            FbpStatus::InvalidArgument
        );
        fbp_problem_free(problem);
    }
}

#[test]
fn status_names_are_stable() {
    unsafe {
        let name = CStr::from_ptr(fbp_status_name(FbpStatus::DataError));
        assert_eq!(name.to_str().unwrap(), "data error");
    }
}

#[test]
fn committed_header_matches_cbindgen_output() {
    let generated_path = concat!(env!("OUT_DIR"), "/fbp.h");
    let generated = std::fs::read_to_string(generated_path).expect("generated header");
    if generated.is_empty() {
        // cbindgen unavailable in this environment; the committed header
        // stays authoritative.
        return;
    }
    let committed = include_str!("../include/fbp.h");
    assert_eq!(
        committed, generated,
        "include/fbp.h is stale; copy the cbindgen output from OUT_DIR"
    );
}
