#ifndef MAXMIN_H
#define MAXMIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call. Zero means success.
 */
typedef enum MaxminStatus {
  MAXMIN_STATUS_OK = 0,
  MAXMIN_STATUS_NULL_POINTER = 1,
  MAXMIN_STATUS_DOMAIN = 2,
  MAXMIN_STATUS_PARAMETER = 3,
  MAXMIN_STATUS_OVERFLOW = 4,
  MAXMIN_STATUS_CONVERGENCE = 5,
  MAXMIN_STATUS_NONNEGATIVITY = 6,
  MAXMIN_STATUS_REGISTRY = 7,
  MAXMIN_STATUS_INSTABILITY = 8,
  MAXMIN_STATUS_PANIC = 99,
} MaxminStatus;

/**
 * Support of a geometric law.
 */
typedef enum MaxminSupport {
  /**
   * {0, 1, 2, ...}
   */
  MAXMIN_SUPPORT_I0 = 0,
  /**
   * {1, 2, 3, ...}
   */
  MAXMIN_SUPPORT_I1 = 1,
} MaxminSupport;

/**
 * Which extreme is being stabilised.
 */
typedef enum MaxminMode {
  MAXMIN_MODE_MAX = 0,
  MAXMIN_MODE_MIN = 1,
} MaxminMode;

/**
 * Opaque distribution of X, continuous or discretized.
 */
typedef struct MaxminFamily MaxminFamily;

/**
 * Opaque law of the random sample size N.
 */
typedef struct MaxminLaw MaxminLaw;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library and valid until the next call on the same thread.
 */
const char *maxmin_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *maxmin_version(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum MaxminStatus maxmin_law_sibuya(double v, struct MaxminLaw **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum MaxminStatus maxmin_law_harris(double a, uint32_t k, struct MaxminLaw **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum MaxminStatus maxmin_law_geometric(double q,
                                       enum MaxminSupport support,
                                       struct MaxminLaw **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum MaxminStatus maxmin_law_degenerate(uint64_t k, struct MaxminLaw **out);

/**
 * # Safety
 * `law` must be null or a handle not yet freed.
 */
void maxmin_law_free(struct MaxminLaw *law);

/**
 * PGF `Q(s)` for `s ∈ [0, 1]`.
 *
 * # Safety
 * `law` must be a live handle and `out` valid for writes.
 */
enum MaxminStatus maxmin_law_pgf(const struct MaxminLaw *law, double s, double *out);

/**
 * `P(N = n)`.
 *
 * # Safety
 * `law` must be a live handle and `out` valid for writes.
 */
enum MaxminStatus maxmin_law_pmf(const struct MaxminLaw *law, uint64_t n, double *out);

/**
 * `P(N > n)`.
 *
 * # Safety
 * `law` must be a live handle and `out` valid for writes.
 */
enum MaxminStatus maxmin_law_survival(const struct MaxminLaw *law, uint64_t n, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum MaxminStatus maxmin_family_exponential(double rate, struct MaxminFamily **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum MaxminStatus maxmin_family_semi_weibull(double alpha,
                                             double p,
                                             double eps,
                                             double phase,
                                             struct MaxminFamily **out);

/**
 * Generalized semi-Pareto with shape `beta`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MaxminStatus maxmin_family_gsp(double alpha,
                                    double p,
                                    double eps,
                                    double phase,
                                    double beta,
                                    struct MaxminFamily **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum MaxminStatus maxmin_family_semi_pareto(double alpha,
                                            double p,
                                            double eps,
                                            double phase,
                                            struct MaxminFamily **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum MaxminStatus maxmin_family_ext_log_logistic(double alpha,
                                                 uint32_t k,
                                                 struct MaxminFamily **out);

/**
 * Discretized copy of a continuous family on {0, 1, 2, ...}.
 *
 * # Safety
 * `family` must be a live handle and `out` valid for writes.
 */
enum MaxminStatus maxmin_family_discretize(const struct MaxminFamily *family,
                                           struct MaxminFamily **out);

/**
 * # Safety
 * `family` must be null or a handle not yet freed.
 */
void maxmin_family_free(struct MaxminFamily *family);

/**
 * 1 when the family is discretized, 0 otherwise (including null).
 *
 * # Safety
 * `family` must be null or a live handle.
 */
int32_t maxmin_family_is_discrete(const struct MaxminFamily *family);

/**
 * `P(X ≤ x)`. Discrete families use their continuous extension between
 * integers.
 *
 * # Safety
 * `family` must be a live handle and `out` valid for writes.
 */
enum MaxminStatus maxmin_family_cdf(const struct MaxminFamily *family, double x, double *out);

/**
 * Quantile at level `u ∈ (0, 1)`. Discrete families return the smallest
 * integer j with `F(j) ≥ u`, as a double.
 *
 * # Safety
 * `family` must be a live handle and `out` valid for writes.
 */
enum MaxminStatus maxmin_family_quantile(const struct MaxminFamily *family, double u, double *out);

/**
 * Stability constant implied by a known pairing.
 *
 * # Safety
 * Handles must be live and `out` valid for writes.
 */
enum MaxminStatus maxmin_auto_constant(const struct MaxminFamily *family,
                                       const struct MaxminLaw *law,
                                       enum MaxminMode m,
                                       double *out);

/**
 * Sup-residual of the stability equation on the default grid. Pass
 * `c <= 0` to use the registry constant. `out_pass` receives 1 or 0.
 *
 * # Safety
 * Handles must be live and out-pointers valid for writes.
 */
enum MaxminStatus maxmin_verify(const struct MaxminFamily *family,
                                const struct MaxminLaw *law,
                                enum MaxminMode m,
                                double c,
                                double tol,
                                double *out_sup_residual,
                                int32_t *out_pass);

/**
 * Monte Carlo KS test of simulated extremes at 1% significance. Pass
 * `c <= 0` to use the registry constant.
 *
 * # Safety
 * Handles must be live and out-pointers valid for writes.
 */
enum MaxminStatus maxmin_mc_test(const struct MaxminFamily *family,
                                 const struct MaxminLaw *law,
                                 enum MaxminMode m,
                                 double c,
                                 uint64_t trials,
                                 uint64_t seed,
                                 double *out_ks,
                                 int32_t *out_pass);

/**
 * Runs the full registry suite and returns its reports as a JSON array.
 * Free the string with [`maxmin_string_free`].
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MaxminStatus maxmin_suite_json(int32_t with_controls, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void maxmin_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAXMIN_H */
