#ifndef DAGAP_H
#define DAGAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DagapStatus {
  DAGAP_STATUS_OK = 0,
  DAGAP_STATUS_NULL_POINTER = 1,
  DAGAP_STATUS_INVALID_ARGUMENT = 2,
  DAGAP_STATUS_MISSING_CAPABILITY = 3,
  DAGAP_STATUS_DATA_ERROR = 4,
  DAGAP_STATUS_CONFIG_ERROR = 5,
  DAGAP_STATUS_NUMERICAL_ERROR = 6,
  DAGAP_STATUS_IO_ERROR = 7,
  DAGAP_STATUS_PANIC = 8,
} DagapStatus;

/**
 * Values accepted by the `variant` argument of [`dagap_estimate_power_sum`].
 */
typedef enum DagapVariant {
  DAGAP_VARIANT_ALG1 = 0,
  DAGAP_VARIANT_ALG1_S = 1,
  DAGAP_VARIANT_ALG2 = 2,
  DAGAP_VARIANT_ALG2_S = 3,
} DagapVariant;

/**
 * A model together with the reference densities it supports.
 */
typedef struct DagapModel DagapModel;

typedef struct DagapEstimate {
  size_t k;
  double mean;
  double std_err;
  uint64_t n_samples;
  double ess;
  double max_weight_share;
  /**
   * NaN when there were too few samples for a tail fit.
   */
  double tail_shape;
  bool degenerate;
} DagapEstimate;

typedef struct DagapBounds {
  double l_point;
  double u_point;
  double l_ci_lo;
  double l_ci_hi;
  double u_ci_lo;
  double u_ci_hi;
  double lambda1_lo;
  double lambda1_hi;
  bool clamped;
} DagapBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *dagap_last_error(void);

/**
 * The Gaussian toy chain with ω = N(0, 1) and ψ = N(0, 2).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum DagapStatus dagap_gaussian_toy_new(struct DagapModel **out);

/**
 * A finite DA chain from an `m × n` joint pmf (rows index U), with the
 * sandwich move enabled and uniform references.
 *
 * # Safety
 * `joint` must point to `m * n` doubles and `out` must be writable.
 */
enum DagapStatus dagap_finite_new(const double *joint, size_t m, size_t n, struct DagapModel **out);

/**
 * Regression with scale-mixture errors; ω is the default inverse-gamma product.
 *
 * # Safety
 * `x` must point to `n * p` doubles, `y` to `n` doubles, `out` must be writable.
 */
enum DagapStatus dagap_regression_new(const double *x,
                                      const double *y,
                                      size_t n,
                                      size_t p,
                                      struct DagapModel **out);

/**
 * Probit regression with prior precision `XᵀX / g` and zero prior mean
 * vector; ψ is the multivariate t with `psi_dof` degrees of freedom
 * (pass 0 for the default of 30).
 *
 * # Safety
 * `x` must point to `n * p` doubles, `y` to `n` values in {0, 1}, `out` must be writable.
 */
enum DagapStatus dagap_probit_new(const double *x,
                                  const double *y,
                                  size_t n,
                                  size_t p,
                                  double g,
                                  double psi_dof,
                                  struct DagapModel **out);

/**
 * Release a model handle. Null is ignored.
 *
 * # Safety
 * `model` must come from a `dagap_*_new` call and not have been freed.
 */
void dagap_model_free(struct DagapModel *model);

/**
 * Estimate `s_k` with `n` samples. `variant` is a [`DagapVariant`] value.
 * Results match `dagap run` for the same seed and `k`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum DagapStatus dagap_estimate_power_sum(const struct DagapModel *model,
                                          uint32_t variant,
                                          size_t k,
                                          uint64_t n,
                                          uint64_t seed,
                                          struct DagapEstimate *out);

/**
 * Bounds on `λ₁` from `s_k` and, when `k ≥ 2`, `s_{k−1}` (ignored for `k = 1`).
 *
 * # Safety
 * `out` must be writable.
 */
enum DagapStatus dagap_bounds(size_t k,
                              double s_k,
                              double se_k,
                              double s_km1,
                              double se_km1,
                              double alpha,
                              struct DagapBounds *out);

/**
 * Run a full experiment from a TOML config and return the JSON report,
 * without runtime fields. Output paths in the config are honored.
 *
 * # Safety
 * `config_toml` must be a nul-terminated UTF-8 string and `out_json` writable.
 */
enum DagapStatus dagap_run_config_json(const char *config_toml, char **out_json);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void dagap_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DAGAP_H */
