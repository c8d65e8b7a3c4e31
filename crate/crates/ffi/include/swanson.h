#ifndef SWANSON_H
#define SWANSON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Shape of the image of the coordinate map.
typedef enum SwansonDomain {
  SWANSON_DOMAIN_UNBOUNDED_LINE = 0,
  SWANSON_DOMAIN_BOUNDED_INTERVAL = 1,
  SWANSON_DOMAIN_SEMI_BOUNDED_BELOW = 2,
  SWANSON_DOMAIN_SEMI_BOUNDED_ABOVE = 3,
} SwansonDomain;

// Result of every fallible call. The numeric values match the CLI exit codes where
// both exist.
typedef enum SwansonStatus {
  SWANSON_STATUS_OK = 0,
  // A required pointer was null or a string was not UTF-8.
  SWANSON_STATUS_INVALID_ARGUMENT = 1,
  // Bad configuration, formula or parameters.
  SWANSON_STATUS_CONFIG = 2,
  // The requested law does not apply to the domain.
  SWANSON_STATUS_DOMAIN = 3,
  // Numerical failure (quadrature, roots, series, positivity).
  SWANSON_STATUS_NUMERIC = 4,
  // The library panicked; the handle involved should be freed.
  SWANSON_STATUS_PANIC = 5,
} SwansonStatus;

// Opaque model handle.
typedef struct SwansonModel SwansonModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null. The pointer stays valid
// until the next failing call on the same thread.
const char *swanson_last_error(void);

// Library version as a static NUL-terminated string.
const char *swanson_version(void);

// Build a model from a catalog profile with `w` derived from `alpha`, `beta` and `k = 1`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer. The handle written to
// `*out` must be released with [`swanson_model_free`].
enum SwansonStatus swanson_model_from_profile(const char *name,
                                              double alpha,
                                              double beta,
                                              struct SwansonModel **out);

// Build a model from a JSON object with the same keys as the command-line config file
// (`profile`, `m`, `A`, `B`, `params`, `w`, `alpha`, `beta`, `k`, `convention_shift`, ...).
//
// # Safety
// As for [`swanson_model_from_profile`].
enum SwansonStatus swanson_model_from_json(const char *json, struct SwansonModel **out);

// Release a model. Null is ignored.
//
// # Safety
// `model` must come from one of the constructors and not have been freed already.
void swanson_model_free(struct SwansonModel *model);

// Domain class and image ends. Infinite ends are reported as `+-INFINITY`.
//
// # Safety
// `model` must be a live handle; the out pointers must be valid.
enum SwansonStatus swanson_model_domain(const struct SwansonModel *model,
                                        enum SwansonDomain *class_,
                                        double *zminus,
                                        double *zplus);

// Coordinate map `z(x)`.
//
// # Safety
// `model` must be a live handle and `out` valid.
enum SwansonStatus swanson_model_z(const struct SwansonModel *model, double x, double *out);

// Effective potential at `x`.
//
// # Safety
// `model` must be a live handle and `out` valid.
enum SwansonStatus swanson_model_v_eff(const struct SwansonModel *model, double x, double *out);

// Analytic spectrum by the law that fits the domain, levels up to index `n_max`.
//
// Up to `capacity` energies go to `energies`; `*count` receives the total number of
// levels, so a call with `capacity = 0` sizes the buffer. Semi-bounded domains report
// `SWANSON_STATUS_DOMAIN`; use [`swanson_model_oracle_spectrum`] there.
//
// # Safety
// `model` must be a live handle, `energies` must hold `capacity` doubles and `count`
// must be valid.
enum SwansonStatus swanson_model_spectrum(const struct SwansonModel *model,
                                          uintptr_t n_max,
                                          double *energies,
                                          uintptr_t capacity,
                                          uintptr_t *count);

// Lowest `levels` eigenvalues of the finite-difference discretization in `x`.
// `grid = 0` picks the default number of intervals.
//
// # Safety
// As for [`swanson_model_spectrum`].
enum SwansonStatus swanson_model_oracle_spectrum(const struct SwansonModel *model,
                                                 uintptr_t grid,
                                                 uintptr_t levels,
                                                 double *energies,
                                                 uintptr_t capacity,
                                                 uintptr_t *count);

// Effective frequency for `H = w(a^+ a + 1/2) + alpha a^2 + beta a^+^2` with `[a, a^+] = 1/k`.
//
// # Safety
// `out` must be valid.
enum SwansonStatus swanson_omega_tilde(double w, double alpha, double beta, double k, double *out);

// Confluent hypergeometric function `M(a, b, y)`.
//
// # Safety
// `out` must be valid.
enum SwansonStatus swanson_hyp1f1(double a, double b, double y, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SWANSON_H */
