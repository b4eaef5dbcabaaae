/* SPDX-License-Identifier: Apache-2.0 */
#ifndef MCHOEFFDING_H
#define MCHOEFFDING_H

#include <stddef.h>
#include <stdint.h>

#if defined(MCH_BUILDING_LIBRARY)
#define MCH_API __attribute__((visibility("default")))
#else
#define MCH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns MCH_OK or an error code; the message for the
 * most recent failure on the calling thread is available from
 * mch_last_error(). Output pointers are left untouched on failure.
 * Matrices are row-major. */
typedef enum mch_status {
    MCH_OK = 0,
    MCH_ERR_INVALID_ARGUMENT,
    MCH_ERR_DIMENSION_MISMATCH,
    MCH_ERR_NON_STOCHASTIC,
    MCH_ERR_NOT_STATIONARY,
    MCH_ERR_DEGENERATE_STATIONARY,
    MCH_ERR_BOUND_VIOLATION,
    MCH_ERR_NOT_MEAN_ZERO,
    MCH_ERR_OUT_OF_RANGE,
    MCH_ERR_NEGATIVE_U,
    MCH_ERR_TOO_LARGE,
    MCH_ERR_UNSORTED,
    MCH_ERR_ODD_Q,
    MCH_ERR_LAMBDA_GE_ONE,
    MCH_ERR_NOT_LATTICE,
    MCH_ERR_OVERFLOW,
    MCH_ERR_INVALID_ORDER,
    MCH_ERR_NON_CONVERGENCE,
    MCH_ERR_EMPTY_INPUT,
    MCH_ERR_PARSE,
    MCH_ERR_IO,
    MCH_ERR_INTERNAL
} mch_status;

MCH_API const char* mch_version(void);
MCH_API const char* mch_status_name(mch_status status);
/* Nonzero for overflow and non-convergence, zero for input errors. */
MCH_API int mch_status_is_numeric(mch_status status);
MCH_API const char* mch_last_error(void);

/* ---- chains and function families ---- */

typedef struct mch_chain mch_chain;
typedef struct mch_functions mch_functions;

/* pi may be NULL, in which case it is computed. */
MCH_API mch_status mch_chain_create(const double* transition, size_t n, const double* pi, mch_chain** out);
/* [[1-p, p], [p, 1-p]] with p = (1 - lambda)/2, 0 <= lambda < 1. */
MCH_API mch_status mch_chain_two_state(double lambda, mch_chain** out);
MCH_API void mch_chain_free(mch_chain* chain);
MCH_API size_t mch_chain_size(const mch_chain* chain);
MCH_API void mch_chain_transition(const mch_chain* chain, double* out);
MCH_API void mch_chain_stationary(const mch_chain* chain, double* out);

/* values is steps x states. bounds may be NULL (then a_i = max_v |f_i(v)|). */
MCH_API mch_status mch_functions_create(const double* values, size_t steps, size_t states, const double* bounds,
                                        mch_functions** out);
/* f_i = (1, -1) for n steps. */
MCH_API mch_status mch_functions_two_state(size_t steps, mch_functions** out);
MCH_API void mch_functions_free(mch_functions* funcs);
MCH_API size_t mch_functions_steps(const mch_functions* funcs);
MCH_API size_t mch_functions_states(const mch_functions* funcs);
MCH_API void mch_functions_values(const mch_functions* funcs, double* out);
MCH_API void mch_functions_bounds(const mch_functions* funcs, double* out);
MCH_API double mch_functions_bound_norm(const mch_functions* funcs);
MCH_API mch_status mch_functions_check_mean_zero(const mch_functions* funcs, const mch_chain* chain);

/* Chain document: {"transition": [[...]], "stationary": [...]?,
 * "functions": {"values": [[...]], "bounds": [...]?}?}. *funcs_out is set to NULL when there are no functions;
 * funcs_out itself may be NULL. */
MCH_API mch_status mch_chain_parse_json(const char* text, mch_chain** chain_out, mch_functions** funcs_out);
MCH_API mch_status mch_chain_load_json(const char* path, mch_chain** chain_out, mch_functions** funcs_out);

/* ---- spectral ---- */

typedef enum mch_norm_index { MCH_NORM_ONE = 1, MCH_NORM_TWO = 2, MCH_NORM_INF = 3 } mch_norm_index;

MCH_API mch_status mch_lambda(const mch_chain* chain, double* out);
/* ||T||_{L_p(pi) -> L_p(pi)} for an n x n matrix t. */
MCH_API mch_status mch_opnorm(const double* t, size_t n, const double* pi, mch_norm_index p, double* out);
/* A^k - E_pi, n x n. k >= 1. */
MCH_API mch_status mch_power_deviation(const mch_chain* chain, size_t k, double* out);

/* ---- bounds ---- */

typedef enum mch_bound_kind {
    MCH_BOUND_IID = 0,
    MCH_BOUND_HEALY,
    MCH_BOUND_RAO,
    MCH_BOUND_FJS,
    MCH_BOUND_GLSS,
    MCH_BOUND_MGF
} mch_bound_kind;

typedef struct mch_bound_constants {
    double matrix_c;
    double glss_c;
    double vector_c;
    double vector_l;
} mch_bound_constants;

MCH_API mch_bound_constants mch_bound_constants_default(void);
MCH_API const char* mch_bound_kind_name(mch_bound_kind kind);

/* Raw value; *vacuous (may be NULL) is set when the value is >= 1.
 * dimension is only used by GLSS; constants may be NULL. */
MCH_API mch_status mch_bound_tail(mch_bound_kind kind, double u, double lambda, double dimension,
                                  const mch_bound_constants* constants, double* out, int* vacuous);
/* w: q zero-based nondecreasing step indices into a[0..n). */
MCH_API mch_status mch_bound_monomial(const size_t* w, size_t q, double lambda, const double* a, size_t n,
                                      double* out);
MCH_API mch_status mch_bound_moment(int q, double lambda, const double* a, size_t n, double* out);
MCH_API mch_status mch_bound_matrix_schatten(double sigma, double sigma_star, double dimension, double lambda,
                                             double b_norm, double c, double* out);
/* |S_{q-1}|. */
MCH_API mch_status mch_admissible_count(int q, size_t* out);

/* ---- exact oracle ---- */

typedef struct mch_distribution mch_distribution;

/* out receives E[S^0..S^q] (q + 1 values). */
MCH_API mch_status mch_exact_moments(const mch_chain* chain, const mch_functions* funcs, int q, double* out);
MCH_API mch_status mch_exact_mgf(const mch_chain* chain, const mch_functions* funcs, double theta, double* out);
MCH_API mch_status mch_exact_tail(const mch_chain* chain, const mch_functions* funcs, double threshold,
                                  double* out);
MCH_API mch_status mch_exact_monomial(const mch_chain* chain, const mch_functions* funcs, const size_t* w,
                                      size_t q, double* out);
MCH_API mch_status mch_exact_distribution(const mch_chain* chain, const mch_functions* funcs,
                                          mch_distribution** out);
MCH_API mch_status mch_brute_force_distribution(const mch_chain* chain, const mch_functions* funcs,
                                                mch_distribution** out);
MCH_API void mch_distribution_free(mch_distribution* dist);
MCH_API size_t mch_distribution_size(const mch_distribution* dist);
/* Support points and probabilities, each of length mch_distribution_size. */
MCH_API void mch_distribution_values(const mch_distribution* dist, double* values, double* probabilities);
MCH_API double mch_distribution_tail(const mch_distribution* dist, double threshold);

/* ---- Monte Carlo ---- */

typedef struct mch_sim_config {
    size_t trials;
    uint64_t seed;
    size_t parallelism;
} mch_sim_config;

typedef struct mch_interval {
    double low;
    double high;
} mch_interval;

typedef struct mch_tail_row {
    double u;
    double threshold;
    size_t hits;
    double estimate;
    mch_interval ci;
    /* iid, healy, rao, fjs */
    double bounds[4];
    int vacuous[4];
} mch_tail_row;

typedef enum mch_norm_kind { MCH_NORM_EUCLIDEAN = 0, MCH_NORM_SUP, MCH_NORM_SCHATTEN_INF } mch_norm_kind;

typedef struct mch_mean_estimate {
    double mean;
    double std_error;
    mch_interval ci;
    size_t trials;
} mch_mean_estimate;

typedef struct mch_vector_tail_row {
    double threshold;
    double u;
    size_t hits;
    double estimate;
    mch_interval ci;
    double curve;
} mch_vector_tail_row;

typedef struct mch_vector_tail_summary {
    mch_mean_estimate gaussian;
    double lambda;
    double fitted_l;
} mch_vector_tail_summary;

MCH_API mch_sim_config mch_sim_config_default(void);
MCH_API mch_status mch_wilson_interval(size_t successes, size_t trials, mch_interval* out);
MCH_API mch_status mch_sample_path(const mch_chain* chain, size_t n, uint64_t seed, size_t* out);
/* rows receives count entries; lambda may be NULL. */
MCH_API mch_status mch_estimate_tail(const mch_chain* chain, const mch_functions* funcs, const double* u_grid,
                                     size_t count, const mch_sim_config* cfg, double* lambda, mch_tail_row* rows);
/* x is n vectors of length dim (dim = d*d for MCH_NORM_SCHATTEN_INF). */
MCH_API mch_status mch_gaussian_norm(const double* x, size_t n, size_t dim, mch_norm_kind kind,
                                     const mch_sim_config* cfg, mch_mean_estimate* out);
/* x holds one vector per step of funcs. constants may be NULL. */
MCH_API mch_status mch_vector_tail(const mch_chain* chain, const mch_functions* funcs, const double* x, size_t dim,
                                   mch_norm_kind kind, const double* thresholds, size_t count,
                                   const mch_sim_config* cfg, const mch_bound_constants* constants,
                                   mch_vector_tail_summary* summary, mch_vector_tail_row* rows);

/* ---- matrix experiments ---- */

typedef enum mch_fill_order { MCH_ORDER_ROW_MAJOR = 0, MCH_ORDER_DIAGONAL_FIRST } mch_fill_order;
typedef enum mch_pattern { MCH_PATTERN_ALL_ONES = 0, MCH_PATTERN_RANDOM_UNIFORM } mch_pattern;

typedef struct mch_matrix_config {
    size_t trials;
    uint64_t seed;
    size_t parallelism;
    const double* c_grid;
    size_t c_count;
    int gaussian_baseline;
} mch_matrix_config;

typedef struct mch_matrix_report {
    size_t dimension;
    double lambda;
    int lambda_vacuous;
    double sigma;
    double sigma_star;
    double b_norm;
    double shape;
    mch_mean_estimate markov;
    double max_norm;
    size_t dominance_violations;
    mch_mean_estimate gaussian;
    double gaussian_ratio;
    double fitted_c;
} mch_matrix_report;

/* d x d coefficient matrix. */
MCH_API mch_status mch_coefficients(mch_pattern pattern, size_t d, uint64_t seed, double* out);
MCH_API mch_status mch_sigma_params(const double* b, size_t d, double* sigma, double* sigma_star);
/* p > 0, or INFINITY for the spectral norm. */
MCH_API mch_status mch_schatten_norm(const double* m, size_t rows, size_t cols, double p, double* out);
/* f has one value per chain state. */
MCH_API mch_status mch_markov_matrix(const double* b, size_t d, mch_fill_order order, const mch_chain* chain,
                                     const double* f, uint64_t seed, double* out);
MCH_API mch_matrix_config mch_matrix_config_default(void);
/* bounds receives c_count values, or NaN for each when lambda >= 1. */
MCH_API mch_status mch_matrix_experiment(const double* b, size_t d, mch_fill_order order, const mch_chain* chain,
                                         const double* f, const mch_matrix_config* cfg, mch_matrix_report* report,
                                         double* bounds);

/* ---- invariant verification ---- */

typedef struct mch_verify_report mch_verify_report;

typedef struct mch_verify_entry {
    const char* suite;
    const char* name;
    size_t cases;
    size_t violations;
    double margin;
    int skipped;
    const char* note;
} mch_verify_entry;

/* suite: all | chain | spectral | oracle | appendix. funcs may be NULL. */
MCH_API mch_status mch_verify(const mch_chain* chain, const mch_functions* funcs, const char* suite, uint64_t seed,
                              mch_verify_report** out);
MCH_API void mch_verify_report_free(mch_verify_report* report);
MCH_API size_t mch_verify_report_size(const mch_verify_report* report);
/* Strings stay valid until the report is freed. */
MCH_API mch_status mch_verify_report_entry(const mch_verify_report* report, size_t i, mch_verify_entry* out);
MCH_API int mch_verify_report_passed(const mch_verify_report* report);

#ifdef __cplusplus
}
#endif

#endif /* MCHOEFFDING_H */
