//! C ABI for the free boundary solvers.
//!
//! The surface follows the usual handle pattern: opaque pointers created and
//! destroyed by paired functions, status codes for every fallible call, and
//! a thread-local message retrievable after a failure. The header `fbp.h`
//! is generated by cbindgen at build time; a committed copy lives under
//! `include/` and a test keeps the two in sync.

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};
use std::fs::File;
use std::io::BufWriter;
use std::panic::{AssertUnwindSafe, catch_unwind};

use fbp_core::benchmarks;
use fbp_core::collocation::PointStrategy;
use fbp_core::problem::ProblemData;
use fbp_core::solver::{self, Algorithm, ConvergenceHistory, SolverConfig};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    GeometryError = 3,
    DataError = 4,
    NumericalError = 5,
    Unsupported = 6,
    IoError = 7,
    InternalError = 8,
}

/// Scheme selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbpAlgorithm {
    Coupled = 0,
    Decoupled = 1,
    Collocation = 2,
}

/// Collocation point strategy.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbpPointStrategy {
    Greville = 0,
    Csp = 1,
}

/// Terminal state of a run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbpRunStatus {
    Converged = 0,
    Plateau = 1,
    MaxIter = 2,
    Failed = 3,
}

/// Options of one solver run; initialize with `fbp_solver_options_default`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FbpSolverOptions {
    pub algorithm: FbpAlgorithm,
    /// Spline degree in both directions (>= 2).
    pub degree: u32,
    /// Elements per direction.
    pub mesh_x: u32,
    pub mesh_y: u32,
    /// Stopping tolerance on the boundary-update norm.
    pub tol: f64,
    pub max_iter: u32,
    pub points: FbpPointStrategy,
}

/// One row of a convergence history. `surface_error` is NaN when the exact
/// boundary is unknown.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FbpIteration {
    pub iter: u32,
    pub dirichlet_error: f64,
    pub surface_error: f64,
    pub update_norm: f64,
    pub wall_time_s: f64,
}

/// Opaque problem handle.
pub struct FbpProblem {
    inner: ProblemData,
}

/// Opaque convergence-history handle.
pub struct FbpHistory {
    inner: ConvergenceHistory,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap_or_default());
}

fn status_of(e: &fbp_core::Error) -> FbpStatus {
    use fbp_core::Error::*;
    match e {
        OutOfDomain { .. } | InvalidArgument(_) => FbpStatus::InvalidArgument,
        Geometry(_) => FbpStatus::GeometryError,
        Data(_) => FbpStatus::DataError,
        Numerical(_) => FbpStatus::NumericalError,
        UnsupportedStrategy(_) => FbpStatus::Unsupported,
        Internal(_) => FbpStatus::InternalError,
        Io(_) => FbpStatus::IoError,
    }
}

fn fail(e: &fbp_core::Error) -> FbpStatus {
    set_last_error(&e.to_string());
    status_of(e)
}

/// Guards the ABI boundary against panics in the Rust core.
fn guarded(f: impl FnOnce() -> FbpStatus) -> FbpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_last_error("internal panic in fbp core");
            FbpStatus::InternalError
        }
    }
}

/// Copies the message of the most recent failure on this thread into `buf`
/// (NUL-terminated, truncated to `cap`). Returns the full message length.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be null (query mode).
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fbp_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                // Always terminate.
                *buf.add(n - 1) = 0;
            }
        }
        bytes.len() - 1
    })
}

/// Static name of a status code.
#[unsafe(no_mangle)]
pub extern "C" fn fbp_status_name(status: FbpStatus) -> *const c_char {
    let name: &'static CStr = match status {
        FbpStatus::Ok => c"ok",
        FbpStatus::NullArgument => c"null argument",
        FbpStatus::InvalidArgument => c"invalid argument",
        FbpStatus::GeometryError => c"geometry error",
        FbpStatus::DataError => c"data error",
        FbpStatus::NumericalError => c"numerical error",
        FbpStatus::Unsupported => c"unsupported",
        FbpStatus::IoError => c"io error",
        FbpStatus::InternalError => c"internal error",
    };
    name.as_ptr()
}

/// Creates one of the built-in benchmark problems (1, 2 or 3).
///
/// # Safety
/// `out` must be a valid pointer; the returned handle must be released with
/// `fbp_problem_free`.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fbp_problem_benchmark(
    test_number: u32,
    out: *mut *mut FbpProblem,
) -> FbpStatus {
    if out.is_null() {
        return FbpStatus::NullArgument;
    }
    guarded(|| match u8::try_from(test_number).ok().and_then(benchmarks::problem_by_number) {
        Some((problem, _)) => {
            let handle = Box::new(FbpProblem { inner: problem });
            unsafe { *out = Box::into_raw(handle) };
            FbpStatus::Ok
        }
        None => {
            set_last_error(&format!("unknown benchmark test {test_number}"));
            FbpStatus::InvalidArgument
        }
    })
}

/// Releases a problem handle (null is a no-op).
///
/// # Safety
/// `problem` must come from `fbp_problem_benchmark` and not be used after.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fbp_problem_free(problem: *mut FbpProblem) {
    if !problem.is_null() {
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Fills `opts` with the defaults: decoupled scheme, degree 3, 16x16 mesh,
/// tolerance 1e-10, 50 iterations, Greville points.
///
/// # Safety
/// `opts` must be a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fbp_solver_options_default(opts: *mut FbpSolverOptions) {
    if opts.is_null() {
        return;
    }
    unsafe {
        *opts = FbpSolverOptions {
            algorithm: FbpAlgorithm::Decoupled,
            degree: 3,
            mesh_x: 16,
            mesh_y: 16,
            tol: 1e-10,
            max_iter: 50,
            points: FbpPointStrategy::Greville,
        };
    }
}

/// Runs the solver; on success `out` owns a history handle.
///
/// # Safety
/// All pointers must be valid; the history must be released with
/// `fbp_history_free`.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fbp_solve(
    problem: *const FbpProblem,
    opts: *const FbpSolverOptions,
    out: *mut *mut FbpHistory,
) -> FbpStatus {
    if problem.is_null() || opts.is_null() || out.is_null() {
        return FbpStatus::NullArgument;
    }
    let (problem, opts) = unsafe { (&*problem, &*opts) };
    guarded(|| {
        let algorithm = match opts.algorithm {
            FbpAlgorithm::Coupled => Algorithm::Coupled,
            FbpAlgorithm::Decoupled => Algorithm::Decoupled,
            FbpAlgorithm::Collocation => Algorithm::Collocation,
        };
        let points = match opts.points {
            FbpPointStrategy::Greville => PointStrategy::Greville,
            FbpPointStrategy::Csp => PointStrategy::Csp,
        };
        let config = SolverConfig::new(
            algorithm,
            opts.degree as usize,
            (opts.mesh_x as usize, opts.mesh_y as usize),
        )
        .with_tol(opts.tol)
        .with_max_iter(opts.max_iter as usize)
        .with_points(points);
        match solver::run(&config, &problem.inner) {
            Ok(history) => {
                unsafe { *out = Box::into_raw(Box::new(FbpHistory { inner: history })) };
                FbpStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of recorded iterations.
///
/// # Safety
/// `history` must be a valid handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fbp_history_len(history: *const FbpHistory) -> usize {
    if history.is_null() {
        return 0;
    }
    unsafe { &*history }.inner.records.len()
}

/// Terminal status of the run.
///
/// # Safety
/// `history` must be a valid handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fbp_history_status(history: *const FbpHistory) -> FbpRunStatus {
    if history.is_null() {
        return FbpRunStatus::Failed;
    }
    match unsafe { &*history }.inner.status {
        solver::Status::Converged => FbpRunStatus::Converged,
        solver::Status::Plateau => FbpRunStatus::Plateau,
        solver::Status::MaxIter => FbpRunStatus::MaxIter,
        solver::Status::Failed { .. } => FbpRunStatus::Failed,
    }
}

/// Copies record `index` into `out`.
///
/// # Safety
/// `history` and `out` must be valid pointers.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fbp_history_record(
    history: *const FbpHistory,
    index: usize,
    out: *mut FbpIteration,
) -> FbpStatus {
    if history.is_null() || out.is_null() {
        return FbpStatus::NullArgument;
    }
    let h = unsafe { &*history };
    match h.inner.records.get(index) {
        Some(r) => {
            unsafe {
                *out = FbpIteration {
                    iter: r.iter as u32,
                    dirichlet_error: r.dirichlet_error,
                    surface_error: r.surface_error.unwrap_or(f64::NAN),
                    update_norm: r.update_norm,
                    wall_time_s: r.wall_time_s,
                };
            }
            FbpStatus::Ok
        }
        None => {
            set_last_error(&format!(
                "record index {index} out of range ({} records)",
                h.inner.records.len()
            ));
            FbpStatus::InvalidArgument
        }
    }
}

/// Height of the final boundary at parameter `t` in `[0, 1]`.
///
/// # Safety
/// `history` and `out` must be valid pointers.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fbp_history_boundary_height(
    history: *const FbpHistory,
    t: f64,
    out: *mut f64,
) -> FbpStatus {
    if history.is_null() || out.is_null() {
        return FbpStatus::NullArgument;
    }
    let h = unsafe { &*history };
    guarded(|| match &h.inner.final_curve {
        Some(curve) => match curve.y(t, 0) {
            Ok(v) => {
                unsafe { *out = v };
                FbpStatus::Ok
            }
            Err(e) => fail(&e),
        },
        None => {
            set_last_error("run failed before a boundary was produced");
            FbpStatus::InvalidArgument
        }
    })
}

/// Writes the history as CSV (same schema as the CLI output).
///
/// # Safety
/// `history` must be valid and `path` a NUL-terminated string.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fbp_history_write_csv(
    history: *const FbpHistory,
    path: *const c_char,
) -> FbpStatus {
    if history.is_null() || path.is_null() {
        return FbpStatus::NullArgument;
    }
    let h = unsafe { &*history };
    let path = match unsafe { CStr::from_ptr(path) }.to_str() {
        Ok(p) => p,
        Err(_) => {
            set_last_error("path is not valid UTF-8");
            return FbpStatus::InvalidArgument;
        }
    };
    guarded(|| match File::create(path) {
        Ok(file) => {
            let mut writer = BufWriter::new(file);
            match h.inner.write_csv(&mut writer) {
                Ok(()) => FbpStatus::Ok,
                Err(e) => {
                    set_last_error(&e.to_string());
                    FbpStatus::IoError
                }
            }
        }
        Err(e) => {
            set_last_error(&format!("cannot create {path}: {e}"));
            FbpStatus::IoError
        }
    })
}

/// Releases a history handle (null is a no-op).
///
/// # Safety
/// `history` must come from `fbp_solve` and not be used after.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fbp_history_free(history: *mut FbpHistory) {
    if !history.is_null() {
        drop(unsafe { Box::from_raw(history) });
    }
}
