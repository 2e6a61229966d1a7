#ifndef GRQOPT_H
#define GRQOPT_H

/* C interface to the solver library. Handles are opaque, every call returns
 * a status code, and failure details are available per thread through
 * grq_last_error(). Strings returned through char** parameters are heap
 * allocated; release them with grq_string_free(). */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define GRQ_OK 0
#define GRQ_ERR_INVALID 1 /* bad argument, unknown method, malformed input */
#define GRQ_ERR_IO 2      /* file could not be opened, read, or written */
#define GRQ_ERR_NUMERIC 3 /* numerical failure: not SPD, no convergence, ... */
#define GRQ_ERR_UNKNOWN 4

const char* grq_version(void);

/* Message describing this thread's most recent failure; empty if none. */
const char* grq_last_error(void);

void grq_string_free(char* s);

typedef struct grq_instance grq_instance;

/* JSON file {"q": n, "B": [...], "D": [...], "W": [...]} with row-major
 * matrices. NULL on failure (see grq_last_error). */
grq_instance* grq_instance_load(const char* path);

/* b, d, w: row-major q*q arrays. W must be symmetric positive definite. */
grq_instance* grq_instance_create(int q, const double* b, const double* d, const double* w);

void grq_instance_free(grq_instance* inst);

int grq_instance_dim(const grq_instance* inst);

/* Objective value and Riemannian gradient norm at a unit-norm x of length q.
 * Either output pointer may be NULL. */
int grq_objective(const grq_instance* inst, const double* x, double* value, double* grad_norm);

typedef struct {
    double value;
    double grad_norm;
    double elapsed_seconds;
    int iterations;
    int termination; /* 0 gradient tolerance met, 1 iteration cap, 2 degenerate step */
} grq_result;

/* method: one of "phom", "prtr", "pcsps", "psps", "ptrscf", "sdp".
 * options_json: NULL or a JSON object; recognized keys include grad_tol,
 * max_iters, steps, inner_iters, final_iters, geometric, gamma, trscf_iters,
 * mesh, qfs_iters, eps_mu, eps_lambda, dual_search_tol, outcome_tol, jobs.
 * x_out: NULL or a caller buffer of length grq_instance_dim(inst). */
int grq_solve(const grq_instance* inst, const char* method, const char* options_json,
              grq_result* result, double* x_out);

/* Writes a JSON-lines dataset of nontrivial instances to out_path.
 * options_json keys: q, count, seed, dof, multistart_count, cluster_tol.
 * summary_json (optional): receives {"attempts", "written", "trivial_rate",
 * "elapsed_seconds"}. */
int grq_generate_dataset(const char* out_path, const char* options_json, char** summary_json);

/* Runs methods_csv (comma separated; NULL or "" means all six) over the
 * dataset. report_path/format ("csv" or "json") are optional; summary_json
 * (optional) receives the full report as JSON. */
int grq_benchmark(const char* dataset_path, const char* methods_csv, const char* options_json,
                  const char* report_path, const char* format, char** summary_json);

/* Solves the estimation problem in sources_path (JSON with Omega1, Omega2,
 * Sigma1, Sigma2) and returns {"tau", "value", "grad_norm", "h1_value",
 * "h2_value", "elapsed_seconds"} through result_json. */
int grq_gtls(const char* sources_path, const char* options_json, char** result_json);

/* Continuation-path diagnostics for an instance; when options_json carries an
 * "x" array, also reports the top-eigenpair stationarity check at that point.
 * result_json receives {"path_records": [...], "eigenpair_check": {...}?}. */
int grq_diagnose(const char* instance_path, const char* options_json, char** result_json);

#ifdef __cplusplus
}
#endif

#endif /* GRQOPT_H */
