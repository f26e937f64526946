/*
 * Copyright 2026 The mccal Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the mccal calibration / multi-calibration library.
 *
 * All objects are opaque handles created by mccal_*_create-style calls and
 * released with the matching mccal_*_free. Every fallible call returns an
 * mccal_status; on failure, mccal_last_error() returns a thread-local
 * diagnostic string that stays valid until the next failing call on the same
 * thread. Output arrays are caller-allocated.
 */

#ifndef MCCAL_MCCAL_H_
#define MCCAL_MCCAL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MCCAL_BUILDING)
#    define MCCAL_API __declspec(dllexport)
#  else
#    define MCCAL_API __declspec(dllimport)
#  endif
#else
#  define MCCAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mccal_status {
  MCCAL_OK = 0,
  MCCAL_ERR_INVALID_ARGUMENT = 1,
  MCCAL_ERR_NONPOSITIVE_WEIGHT = 2,
  MCCAL_ERR_SCORE_OUT_OF_RANGE = 3,
  MCCAL_ERR_INVALID_RESPONSE = 4,
  MCCAL_ERR_SHAPE_MISMATCH = 5,
  MCCAL_ERR_ZERO_SCORE = 6,
  MCCAL_ERR_NO_POSITIVES = 7,
  MCCAL_ERR_EMPTY_SUBPOPULATION = 8,
  MCCAL_ERR_WRONG_MODE = 9,
  MCCAL_ERR_INFINITE_RATIO = 10,
  MCCAL_ERR_NO_COVARIATES = 11,
  MCCAL_ERR_ATTEMPTS_EXHAUSTED = 12,
  MCCAL_ERR_PREDICTOR_CONTRACT = 13,
  MCCAL_ERR_NON_FINITE = 14,
  MCCAL_ERR_IO = 15,
  MCCAL_ERR_PARSE = 16,
  MCCAL_ERR_INTERNAL = 99
} mccal_status;

typedef enum mccal_mode {
  MCCAL_MODE_BERNOULLI = 0,
  MCCAL_MODE_REGRESSION = 1
} mccal_mode;

typedef enum mccal_weighting {
  MCCAL_WEIGHTING_UNIFORM = 0,
  MCCAL_WEIGHTING_PROPORTIONAL = 1,
  MCCAL_WEIGHTING_PROPORTIONAL_CLAMPED = 2,
  MCCAL_WEIGHTING_PROPORTIONAL_SHIFTED = 3,
  MCCAL_WEIGHTING_LOW_PREVALENCE = 4
} mccal_weighting;

typedef struct mccal_population mccal_population;
typedef struct mccal_subpops mccal_subpops;
typedef struct mccal_report mccal_report;

typedef struct mccal_subpop_metrics {
  size_t label;
  size_t size;
  double total_weight;
  double kuiper;
  double sigma;
  double expected_kuiper_null;
  double normalized;
} mccal_subpop_metrics;

typedef struct mccal_summary {
  double kuiper;  /* D_0, full population */
  double sigma;   /* sigma_0 */
  double multical;
  double multi_ablate;
  size_t argmax_multical;
  size_t argmax_ablate;
  double expectation_at_argmax;
} mccal_summary;

typedef struct mccal_seed_aggregate {
  double mean;
  double twice_sem;
  size_t count;
} mccal_seed_aggregate;

typedef struct mccal_synth_oracle {
  size_t n0;
  size_t ell;
  double d0;
  double multical;
  double multi_ablate;
  size_t argmax_k;
} mccal_synth_oracle;

MCCAL_API const char* mccal_last_error(void);
MCCAL_API const char* mccal_status_name(mccal_status status);
MCCAL_API double mccal_null_expectation_factor(void);

/* ---- population ------------------------------------------------------- */

/* Builds a score-sorted population. `weights` may be NULL (uniform).
 * `covariates` is row-major n x p and may be NULL when p == 0. `nominal`
 * holds p flags (nonzero = nominal) and may be NULL (all ordinal). */
MCCAL_API mccal_status mccal_population_create(
    size_t n, const double* scores, const double* responses,
    const double* weights, size_t p, const double* covariates,
    const int* nominal, mccal_mode mode, mccal_population** out);

MCCAL_API void mccal_population_free(mccal_population* pop);

MCCAL_API size_t mccal_population_size(const mccal_population* pop);
MCCAL_API size_t mccal_population_num_covariates(const mccal_population* pop);
MCCAL_API mccal_mode mccal_population_mode(const mccal_population* pop);

/* Copies the sorted columns out; any pointer may be NULL. Each non-NULL
 * array must hold mccal_population_size() entries; `covariates` holds n x p
 * row-major values. */
MCCAL_API mccal_status mccal_population_get(
    const mccal_population* pop, double* scores, double* responses,
    double* weights, size_t* original_index, double* covariates);

/* New population with weights replaced per `kind`. `rho` is read only by the
 * clamped and shifted variants. */
MCCAL_API mccal_status mccal_population_apply_weighting(
    const mccal_population* pop, mccal_weighting kind, double rho,
    mccal_population** out);

/* Cumulative differences C_0..C_n of the full population; `out` holds
 * n + 1 values. */
MCCAL_API mccal_status mccal_population_cumulative_differences(
    const mccal_population* pop, double* out);

/* ---- subpopulations --------------------------------------------------- */

/* Random median-split subpopulations. max_attempts == 0 selects 100 * ell. */
MCCAL_API mccal_status mccal_subpops_generate(
    const mccal_population* pop, size_t ell, size_t min_size, uint64_t seed,
    size_t max_attempts, mccal_subpops** out);

/* The canonical middle-block subpopulations of the synthetic dataset with
 * parameter q; the population must have q(q+1) members. */
MCCAL_API mccal_status mccal_subpops_synthetic(const mccal_population* pop,
                                               long long q,
                                               mccal_subpops** out);

/* Empty set to which caller-defined subpopulations can be added. */
MCCAL_API mccal_status mccal_subpops_create(const mccal_population* pop,
                                            mccal_subpops** out);

/* Adds strictly increasing positions into the score-sorted population.
 * The new subpopulation gets label count + 1. */
MCCAL_API mccal_status mccal_subpops_add(mccal_subpops* subpops,
                                         const size_t* indices, size_t n);

MCCAL_API void mccal_subpops_free(mccal_subpops* subpops);

MCCAL_API size_t mccal_subpops_count(const mccal_subpops* subpops);
MCCAL_API size_t mccal_subpops_attempts(const mccal_subpops* subpops);
MCCAL_API int mccal_subpops_exhausted(const mccal_subpops* subpops);
MCCAL_API size_t mccal_subpops_label(const mccal_subpops* subpops, size_t i);
MCCAL_API size_t mccal_subpops_size(const mccal_subpops* subpops, size_t i);
MCCAL_API size_t mccal_subpops_depth(const mccal_subpops* subpops, size_t i);
MCCAL_API mccal_status mccal_subpops_indices(const mccal_subpops* subpops,
                                             size_t i, size_t* out);

/* Writes a NUL-terminated description of the split path of entry i into
 * buf (truncated to buflen) and the full length (without NUL) into
 * *needed. `names` (may be NULL) names the covariate columns. */
MCCAL_API mccal_status mccal_subpops_describe(const mccal_subpops* subpops,
                                              size_t i,
                                              const char* const* names,
                                              size_t num_names, char* buf,
                                              size_t buflen, size_t* needed);

/* ---- metrics ---------------------------------------------------------- */

/* Evaluates the full population (label 0) plus every subpopulation in
 * `subpops` (may be NULL). threads > 1 evaluates subpopulations in
 * parallel with identical results. */
MCCAL_API mccal_status mccal_report_compute(const mccal_population* pop,
                                            const mccal_subpops* subpops,
                                            unsigned threads,
                                            mccal_report** out);

MCCAL_API void mccal_report_free(mccal_report* report);

MCCAL_API mccal_status mccal_report_summary(const mccal_report* report,
                                            mccal_summary* out);
MCCAL_API size_t mccal_report_count(const mccal_report* report);
MCCAL_API mccal_status mccal_report_entry(const mccal_report* report,
                                          size_t i,
                                          mccal_subpop_metrics* out);

MCCAL_API mccal_status mccal_expected_kuiper_null(double sigma, double* out);

MCCAL_API mccal_status mccal_aggregate(const double* values, size_t n,
                                       mccal_seed_aggregate* out);

/* ---- synthetic oracle ------------------------------------------------- */

MCCAL_API mccal_status mccal_synth_population(long long q,
                                              mccal_population** out);

/* `dk` (may be NULL) receives ell values for k = 1..ell; `sigma` (may be
 * NULL) receives ell + 1 values for k = 0..ell. */
MCCAL_API mccal_status mccal_synth_oracle_eval(long long q,
                                               mccal_synth_oracle* out,
                                               double* dk, double* sigma);

/* ---- augmentation ----------------------------------------------------- */

/* Number of training rows the predictor is refit on. */
MCCAL_API mccal_status mccal_fitting_row_count(size_t n_train,
                                               double holdout_fraction,
                                               size_t* out);

/* Positions of those rows; `out` holds mccal_fitting_row_count() values. */
MCCAL_API mccal_status mccal_fitting_rows(size_t n_train,
                                          double holdout_fraction,
                                          size_t* out);

/* Augmentation with the built-in logistic regression. Covariates are
 * row-major with p columns. `base_fit` holds one score per fitting row. */
MCCAL_API mccal_status mccal_augment_logistic(
    size_t n_train, size_t p, const double* train_covariates,
    const double* train_responses, const double* base_fit, size_t rounds,
    double holdout_fraction, size_t n_eval, const double* eval_covariates,
    const double* base_eval, double* out_eval);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* MCCAL_MCCAL_H_ */
