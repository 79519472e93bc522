/* Copyright 2026 The opgrowth Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libopgrowth: Lanczos coefficients, Krylov-chain dynamics,
 * closed forms and scaling fits for the Ising chain in transverse and
 * longitudinal fields.
 *
 * Every fallible call returns an og_status; on failure og_last_error()
 * describes it (per thread, valid until the next failing call on that
 * thread). Handles are opaque and owned by the caller; free them with the
 * matching og_*_free, which accepts NULL.
 *
 * Text results use a two-call protocol: pass buf = NULL, cap = 0 to get the
 * required size (including the terminating NUL) in *needed, then call again
 * with a buffer of that size.
 */

#ifndef OPGROWTH_OPGROWTH_H_
#define OPGROWTH_OPGROWTH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(OPGROWTH_BUILDING_LIBRARY)
#define OG_API __attribute__((visibility("default")))
#else
#define OG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum og_status {
  OG_OK = 0,
  OG_ERR_INVALID_ARGUMENT = 1,
  OG_ERR_PARSE = 2,
  OG_ERR_KRYLOV_EXHAUSTED = 3,
  OG_ERR_MEMORY_BUDGET = 4,
  OG_ERR_CONVENTION = 5,
  OG_ERR_WINDOW_TOO_SMALL = 6,
  OG_ERR_DIMENSION_CAP = 7,
  OG_ERR_NUMERICAL = 8,
  OG_ERR_IO = 9,
  OG_ERR_SUPPORT_OVERFLOW = 10,
  OG_ERR_INTERNAL = 99
} og_status;

OG_API const char* og_version(void);
OG_API const char* og_last_error(void);
OG_API const char* og_status_name(og_status status);

/* ---- model ------------------------------------------------------------ */

typedef struct og_model og_model;

/* {"h": 1, "g": 0, "g_profile": "uniform"|"site0"|"none",
 *  "observable": "x"|"y"|"z"|"xx"|"yy"|"zz"} */
OG_API og_status og_model_from_json(const char* json, og_model** out);
OG_API og_status og_model_to_json(const og_model* model, char* buf,
                                  size_t cap, size_t* needed);
OG_API void og_model_free(og_model* model);

/* ---- Lanczos sequences ------------------------------------------------ */

typedef struct og_sequence og_sequence;

typedef enum og_lanczos_status {
  OG_LANCZOS_COMPLETE = 0,
  OG_LANCZOS_KRYLOV_EXHAUSTED = 1,
  OG_LANCZOS_MEMORY_BUDGET_EXCEEDED = 2
} og_lanczos_status;

typedef struct og_lanczos_options {
  double epsilon;     /* pruning threshold, 0 = exact */
  uint64_t max_terms; /* per-vector term cap, 0 = unlimited */
  int threads;        /* < 1 is treated as 1 */
} og_lanczos_options;

OG_API og_lanczos_options og_lanczos_options_default(void);

typedef void (*og_progress_fn)(void* user, int n, double b, uint64_t terms,
                               double seconds);

/* Early termination (exhausted Krylov space, term budget) is not an error:
 * the sequence is returned with og_sequence_status set. */
OG_API og_status og_lanczos_run(const og_model* model, int n_max,
                                const og_lanczos_options* options,
                                og_progress_fn progress, void* user,
                                og_sequence** out);

/* Max |(O_i|O_j)| over i < j <= n_check (n_check <= 20). */
OG_API og_status og_overlap_check(const og_model* model, int n_check,
                                  const og_lanczos_options* options,
                                  double* out);

/* Dense periodic-chain oracle, 2 <= sites <= 8. */
OG_API og_status og_oracle_dense(const og_model* model, int sites, int n_max,
                                 og_sequence** out);

/* Wraps b[0..count-1] (b[0] must be 0, the rest > 0), e.g. read from CSV. */
OG_API og_status og_sequence_from_b(const double* b, size_t count,
                                    og_sequence** out);
OG_API size_t og_sequence_length(const og_sequence* seq); /* depth + 1 */
OG_API og_status og_sequence_copy_b(const og_sequence* seq, double* out,
                                    size_t cap);
OG_API og_lanczos_status og_sequence_status(const og_sequence* seq);
OG_API og_status og_sequence_meta_json(const og_sequence* seq, char* buf,
                                       size_t cap, size_t* needed);
OG_API void og_sequence_free(og_sequence* seq);

/* ---- closed forms and special functions ------------------------------- */

typedef enum og_solvable_kind {
  OG_TYPE_I = 1,  /* b_n = alpha */
  OG_TYPE_II = 2, /* b_n = alpha sqrt(n) */
  OG_TYPE_III = 3 /* b_n = alpha sqrt(n (n - 1 + eta)) */
} og_solvable_kind;

typedef struct og_solvable {
  og_solvable_kind kind;
  double alpha;
  double eta;
} og_solvable;

OG_API og_status og_closed_form_b(const og_solvable* s, int n, double* out);
OG_API og_status og_closed_form_phi(const og_solvable* s, int n, double t,
                                    double* out);
OG_API og_status og_closed_form_autocorrelation(const og_solvable* s,
                                                double t, double* out);
OG_API og_status og_closed_form_mean_depth(const og_solvable* s, double t,
                                           double* out);
OG_API og_status og_closed_form_sequence(const og_solvable* s, int n_max,
                                         og_sequence** out);
OG_API double og_type_I_depth_slope(double alpha);

OG_API og_status og_lambert_w(double x, double* out);
OG_API og_status og_bessel_j(int n, double x, double* out);
OG_API og_status og_brandt_jacoby_cx(double t, double* out);
OG_API og_status og_gaussian_cz(double t, double* out);

/* ---- Krylov-chain dynamics -------------------------------------------- */

typedef struct og_state og_state;

typedef enum og_extension {
  OG_EXTEND_NONE = 0,
  OG_EXTEND_FREEZE_LAST = 1,
  OG_EXTEND_LINEAR_OVER_W = 2
} og_extension;

typedef struct og_evolve_options {
  double tolerance;         /* global error target, > 0 */
  double leakage_threshold; /* on phi_{n_trunc}^2 */
  double step;              /* > 0 forces the RK4 step */
  int store_phi;            /* keep all amplitudes */
  og_extension extension;   /* for sequences shorter than n_trunc + 1 */
} og_evolve_options;

OG_API og_evolve_options og_evolve_options_default(void);

OG_API og_status og_evolve(const og_sequence* seq, const double* times,
                           size_t count, int n_trunc,
                           const og_evolve_options* options, og_state** out);

OG_API size_t og_state_time_count(const og_state* state);
OG_API int og_state_n_trunc(const og_state* state);
/* Each copies og_state_time_count values. */
OG_API og_status og_state_times(const og_state* state, double* out,
                                size_t cap);
OG_API og_status og_state_autocorrelation(const og_state* state, double* out,
                                          size_t cap);
OG_API og_status og_state_mean_depth(const og_state* state, double* out,
                                     size_t cap);
OG_API og_status og_state_norm_sq(const og_state* state, double* out,
                                  size_t cap);
OG_API og_status og_state_leakage(const og_state* state, double* out,
                                  size_t cap);
/* n_trunc + 1 amplitudes at one stored time; needs store_phi. */
OG_API og_status og_state_phi(const og_state* state, size_t time_index,
                              double* out, size_t cap);
/* Largest certified time, or -1. */
OG_API double og_state_certified_until(const og_state* state);
OG_API og_status og_state_depth_slope(const og_state* state, double t_lo,
                                      double t_hi, double* out);
OG_API og_status og_state_meta_json(const og_state* state, char* buf,
                                    size_t cap, size_t* needed);
OG_API void og_state_free(og_state* state);

/* ---- scaling fits ----------------------------------------------------- */

typedef enum og_fit_kind {
  OG_FIT_LINEAR_IN_N = 0,      /* b_n vs n */
  OG_FIT_LINEAR_IN_SQRT_N = 1, /* b_n vs sqrt(n) */
  OG_FIT_N_OVER_BN_VS_W = 2    /* n / b_n vs W(n) */
} og_fit_kind;

typedef struct og_fit_report {
  og_fit_kind kind;
  int n_lo;
  int n_hi;
  double slope;
  double intercept;
  double rms_residual;
  double normalized_rms_residual;
  double curvature_diagnostic;
  double second_difference_diagnostic;
} og_fit_report;

/* n_lo, n_hi < 0 select the default window (upper half of the depth). */
OG_API og_status og_fit(const og_sequence* seq, og_fit_kind kind, int n_lo,
                        int n_hi, og_fit_report* out);
/* "n,x,y,fitted,residual,W" rows over the fit window. */
OG_API og_status og_fit_csv(const og_sequence* seq, og_fit_kind kind,
                            int n_lo, int n_hi, char* buf, size_t cap,
                            size_t* needed);
OG_API og_status og_fit_report_json(const og_fit_report* report, char* buf,
                                    size_t cap, size_t* needed);

/* ---- crossover collapse ----------------------------------------------- */

typedef struct og_collapse og_collapse;

typedef struct og_collapse_options {
  double threshold;   /* relative departure marking n_c, default 0.2 */
  int n_min;          /* first n considered, default 1 */
  double depth_slope; /* > 0 adds t_c = n_c / depth_slope */
} og_collapse_options;

OG_API og_collapse_options og_collapse_options_default(void);

OG_API og_status og_collapse_run(const og_sequence* reference,
                                 const double* g, const og_sequence* const* runs,
                                 size_t count,
                                 const og_collapse_options* options,
                                 og_collapse** out);
OG_API double og_collapse_error(const og_collapse* c);
OG_API double og_collapse_n_c_slope(const og_collapse* c);
OG_API double og_collapse_shift_spread(const og_collapse* c);
OG_API og_status og_collapse_json(const og_collapse* c, char* buf, size_t cap,
                                  size_t* needed);
/* "n,g,scaled_delta_b" */
OG_API og_status og_collapse_csv(const og_collapse* c, char* buf, size_t cap,
                                 size_t* needed);
OG_API void og_collapse_free(og_collapse* c);

/* ---- operator vectors (checkpoint text format) ------------------------ */

typedef struct og_operator og_operator;

/* One "coefficient<TAB>string" line per term, '#' starts a comment. */
OG_API og_status og_operator_from_text(const char* text, og_operator** out);
OG_API og_status og_operator_to_text(const og_operator* op, char* buf,
                                     size_t cap, size_t* needed);
OG_API size_t og_operator_size(const og_operator* op);
OG_API double og_operator_norm(const og_operator* op);
/* B with [H, A] = i B for the model's Hamiltonian. */
OG_API og_status og_operator_apply_liouvillian(const og_model* model,
                                               const og_operator* op,
                                               int threads, og_operator** out);
OG_API void og_operator_free(og_operator* op);

#ifdef __cplusplus
}
#endif

#endif /* OPGROWTH_OPGROWTH_H_ */
