#ifndef FBP_H
#define FBP_H

/* This file is generated by cbindgen from fbp-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum {
  FBP_STATUS_OK = 0,
  FBP_STATUS_NULL_ARGUMENT = 1,
  FBP_STATUS_INVALID_ARGUMENT = 2,
  FBP_STATUS_GEOMETRY_ERROR = 3,
  FBP_STATUS_DATA_ERROR = 4,
  FBP_STATUS_NUMERICAL_ERROR = 5,
  FBP_STATUS_UNSUPPORTED = 6,
  FBP_STATUS_IO_ERROR = 7,
  FBP_STATUS_INTERNAL_ERROR = 8,
} FbpStatus;

/**
 * Scheme selector.
 */
typedef enum {
  FBP_ALGORITHM_COUPLED = 0,
  FBP_ALGORITHM_DECOUPLED = 1,
  FBP_ALGORITHM_COLLOCATION = 2,
} FbpAlgorithm;

/**
 * Collocation point strategy.
 */
typedef enum {
  FBP_POINT_STRATEGY_GREVILLE = 0,
  FBP_POINT_STRATEGY_CSP = 1,
} FbpPointStrategy;

/**
 * Terminal state of a run.
 */
typedef enum {
  FBP_RUN_STATUS_CONVERGED = 0,
  FBP_RUN_STATUS_PLATEAU = 1,
  FBP_RUN_STATUS_MAX_ITER = 2,
  FBP_RUN_STATUS_FAILED = 3,
} FbpRunStatus;

/**
 * Opaque convergence-history handle.
 */
typedef struct FbpHistory FbpHistory;

/**
 * Opaque problem handle.
 */
typedef struct FbpProblem FbpProblem;

/**
 * Options of one solver run; initialize with `fbp_solver_options_default`.
 */
typedef struct {
  FbpAlgorithm algorithm;
  /**
   * Spline degree in both directions (>= 2).
   */
  uint32_t degree;
  /**
   * Elements per direction.
   */
  uint32_t mesh_x;
  uint32_t mesh_y;
  /**
   * Stopping tolerance on the boundary-update norm.
   */
  double tol;
  uint32_t max_iter;
  FbpPointStrategy points;
} FbpSolverOptions;

/**
 * One row of a convergence history. `surface_error` is NaN when the exact
 * boundary is unknown.
 */
typedef struct {
  uint32_t iter;
  double dirichlet_error;
  double surface_error;
  double update_norm;
  double wall_time_s;
} FbpIteration;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the message of the most recent failure on this thread into `buf`
 * (NUL-terminated, truncated to `cap`). Returns the full message length.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes, or be null (query mode).
 */
size_t fbp_last_error_message(char *buf, size_t cap);

/**
 * Static name of a status code.
 */
const char *fbp_status_name(FbpStatus status);

/**
 * Creates one of the built-in benchmark problems (1, 2 or 3).
 *
 * # Safety
 * `out` must be a valid pointer; the returned handle must be released with
 * `fbp_problem_free`.
 */
FbpStatus fbp_problem_benchmark(uint32_t test_number, FbpProblem **out);

/**
 * Releases a problem handle (null is a no-op).
 *
 * # Safety
 * `problem` must come from `fbp_problem_benchmark` and not be used after.
 */
void fbp_problem_free(FbpProblem *problem);

/**
 * Fills `opts` with the defaults: decoupled scheme, degree 3, 16x16 mesh,
 * tolerance 1e-10, 50 iterations, Greville points.
 *
 * # Safety
 * `opts` must be a valid pointer.
 */
void fbp_solver_options_default(FbpSolverOptions *opts);

/**
 * Runs the solver; on success `out` owns a history handle.
 *
 * # Safety
 * All pointers must be valid; the history must be released with
 * `fbp_history_free`.
 */
FbpStatus fbp_solve(const FbpProblem *problem, const FbpSolverOptions *opts, FbpHistory **out);

/**
 * Number of recorded iterations.
 *
 * # Safety
 * `history` must be a valid handle.
 */
size_t fbp_history_len(const FbpHistory *history);

/**
 * Terminal status of the run.
 *
 * # Safety
 * `history` must be a valid handle.
 */
FbpRunStatus fbp_history_status(const FbpHistory *history);

/**
 * Copies record `index` into `out`.
 *
 * # Safety
 * `history` and `out` must be valid pointers.
 */
FbpStatus fbp_history_record(const FbpHistory *history, size_t index, FbpIteration *out);

/**
 * Height of the final boundary at parameter `t` in `[0, 1]`.
 *
 * # Safety
 * `history` and `out` must be valid pointers.
 */
FbpStatus fbp_history_boundary_height(const FbpHistory *history, double t, double *out);

/**
 * Writes the history as CSV (same schema as the CLI output).
 *
 * # Safety
 * `history` must be valid and `path` a NUL-terminated string.
 */
FbpStatus fbp_history_write_csv(const FbpHistory *history, const char *path);

/**
 * Releases a history handle (null is a no-op).
 *
 * # Safety
 * `history` must come from `fbp_solve` and not be used after.
 */
void fbp_history_free(FbpHistory *history);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FBP_H */
