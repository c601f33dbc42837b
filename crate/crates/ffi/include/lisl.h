#ifndef LISL_H
#define LISL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum LislStatus {
  LISL_STATUS_OK = 0,
  LISL_STATUS_NULL_POINTER = 1,
  LISL_STATUS_INVALID_ARGUMENT = 2,
  LISL_STATUS_UNKNOWN_PROBLEM = 3,
  LISL_STATUS_CFL_VIOLATION = 4,
  LISL_STATUS_SOLVABILITY_VIOLATION = 5,
  LISL_STATUS_HOWARD_NON_CONVERGENCE = 6,
  LISL_STATUS_LINEAR_SOLVE_FAILED = 7,
  LISL_STATUS_UNSUPPORTED = 8,
  LISL_STATUS_IO = 9,
  LISL_STATUS_PANIC = 10,
} LislStatus;

// A built-in benchmark problem.
typedef struct LislProblem LislProblem;

// A computed solution at the final time.
typedef struct LislSolution LislSolution;

// Discretization parameters. Obtain defaults with
// [`lisl_problem_default_params`] and adjust fields as needed.
typedef struct LislParams {
  double dx;
  // Stencil parameter `k`.
  double k;
  // Time-stepping weight in `[0, 1]`.
  double theta;
  uint32_t time_steps;
  // Stencil variant, 1 to 5.
  uint32_t variant;
  // Samples per control parameter.
  uint32_t control_resolution;
  // Evaluation budget refining sampled controls in Howard's method.
  uint32_t control_refinement;
} LislParams;

// CFL check result.
typedef struct LislCflReport {
  // Nonzero if the time step satisfies the restriction.
  int32_t pass;
  // Largest admissible time step; infinity when unrestricted.
  double max_allowed_dt;
  // Largest time step with unique solvability; infinity when unrestricted.
  double solvability_max_dt;
} LislCflReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Looks up a built-in benchmark (`convergence-superrep`,
// `pricing-superrep`, `smooth-1d`) and stores a new handle in `*out`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum LislStatus lisl_problem_new(const char *name, struct LislProblem **out);

// Releases a problem handle. Null is ignored.
//
// # Safety
// `problem` must come from [`lisl_problem_new`] and not be used afterwards.
void lisl_problem_free(struct LislProblem *problem);

// Fills `*out` with the benchmark's default parameters at mesh size `dx`
// (`k = sqrt(dx)`, `N_T = T / dx`).
//
// # Safety
// `problem` and `out` must be valid pointers.
enum LislStatus lisl_problem_default_params(const struct LislProblem *problem,
                                            double dx,
                                            struct LislParams *out);

// Checks the time-step restriction for `params` without solving.
//
// # Safety
// All pointers must be valid.
enum LislStatus lisl_check_cfl(const struct LislProblem *problem,
                               const struct LislParams *params,
                               struct LislCflReport *out);

// Solves the problem up to its horizon and stores a new solution handle in
// `*out`.
//
// # Safety
// All pointers must be valid.
enum LislStatus lisl_solve(const struct LislProblem *problem,
                           const struct LislParams *params,
                           struct LislSolution **out);

// Releases a solution handle. Null is ignored.
//
// # Safety
// `solution` must come from [`lisl_solve`] and not be used afterwards.
void lisl_solution_free(struct LislSolution *solution);

// Number of grid nodes (0 for a null handle).
//
// # Safety
// `solution` must be null or a valid handle.
size_t lisl_solution_node_count(const struct LislSolution *solution);

// Spatial dimension, 1 or 2 (0 for a null handle).
//
// # Safety
// `solution` must be null or a valid handle.
size_t lisl_solution_dim(const struct LislSolution *solution);

// Final time of the solution (NaN for a null handle).
//
// # Safety
// `solution` must be null or a valid handle.
double lisl_solution_final_time(const struct LislSolution *solution);

// Copies the nodal values into `values[0..len]`; `len` must equal the node
// count.
//
// # Safety
// `values` must point to `len` writable doubles.
enum LislStatus lisl_solution_values(const struct LislSolution *solution,
                                     double *values,
                                     size_t len);

// Copies node coordinates into `coords[0..2*len]` as `(x1, x2)` pairs (the
// second entry is 0 in one dimension); `len` must equal the node count.
//
// # Safety
// `coords` must point to `2 * len` writable doubles.
enum LislStatus lisl_solution_nodes(const struct LislSolution *solution,
                                    double *coords,
                                    size_t len);

// Total number of Howard linear solves over all steps.
//
// # Safety
// `solution` must be null or a valid handle.
size_t lisl_solution_howard_iterations(const struct LislSolution *solution);

// Sup-norm error against the exact solution at the final time; fails with
// [`LislStatus::Unsupported`] when the problem has none.
//
// # Safety
// All pointers must be valid.
enum LislStatus lisl_solution_sup_error(const struct LislSolution *solution, double *out);

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on this thread.
const char *lisl_last_error_message(void);

// Static name of a status code, e.g. `"cfl-violation"`.
const char *lisl_status_name(enum LislStatus status);

// Library version, e.g. `"0.1.0"`.
const char *lisl_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LISL_H */
