#ifndef OMEGA_CLASS_H
#define OMEGA_CLASS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OmegaStatus {
  OMEGA_STATUS_OK = 0,
  OMEGA_STATUS_NULL_POINTER = 1,
  OMEGA_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed input: unknown id, bad literal, unsupported parameters.
   */
  OMEGA_STATUS_USAGE = 3,
  /**
   * The computation failed (pole, evaluation error, ...).
   */
  OMEGA_STATUS_COMPUTATION = 4,
  OMEGA_STATUS_PANIC = 5,
} OmegaStatus;

typedef enum OmegaClass {
  OMEGA_CLASS_OMEGA = 0,
  OMEGA_CLASS_U = 1,
} OmegaClass;

typedef enum OmegaDecision {
  OMEGA_DECISION_MEMBER = 0,
  OMEGA_DECISION_NON_MEMBER = 1,
  OMEGA_DECISION_INCONCLUSIVE = 2,
} OmegaDecision;

typedef enum OmegaProperty {
  OMEGA_PROPERTY_STARLIKE = 0,
  OMEGA_PROPERTY_CONVEX = 1,
  OMEGA_PROPERTY_CLOSE_TO_CONVEX = 2,
  OMEGA_PROPERTY_OMEGA_BOUND = 3,
  OMEGA_PROPERTY_U_BOUND = 4,
} OmegaProperty;

/**
 * Opaque handle to an analytic function.
 */
typedef struct OmegaFunction OmegaFunction;

typedef struct OmegaVerdict {
  enum OmegaDecision decision;
  bool has_witness;
  double witness_re;
  double witness_im;
  double sup_found;
  double margin;
  double threshold;
} OmegaVerdict;

typedef struct OmegaBoundReport {
  double value;
  double bound;
  double slack;
  /**
   * The bound is met with equality (to 1e-12) by a known extremal function.
   */
  bool attained;
  /**
   * The function was not certified to lie in the class.
   */
  bool uncertified;
} OmegaBoundReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *omega_last_error(void);

/**
 * Parses a catalog id (`ftilde:5`, `f1`, ...) or a series literal
 * (`0, 1, 0.25`). The handle must be released with `omega_function_free`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum OmegaStatus omega_function_parse(const char *spec, struct OmegaFunction **out);

/**
 * `z + z^n / (2(n-1))`, `n >= 2`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum OmegaStatus omega_function_extremal(size_t n, struct OmegaFunction **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `f` must come from this library and not be used afterwards.
 */
void omega_function_free(struct OmegaFunction *f);

/**
 * Taylor coefficient `a_j` of `f`.
 *
 * # Safety
 * `f` must be a live handle; `re` and `im` valid pointers.
 */
enum OmegaStatus omega_function_coefficient(const struct OmegaFunction *f,
                                            size_t j,
                                            double *re,
                                            double *im);

/**
 * Membership verdict for Ω or 𝒰.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum OmegaStatus omega_is_member(const struct OmegaFunction *f,
                                 enum OmegaClass class_,
                                 double tol,
                                 struct OmegaVerdict *out);

/**
 * Largest radius on which the property holds, bisected to `tol`.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum OmegaStatus omega_radius(const struct OmegaFunction *f,
                              enum OmegaProperty property,
                              double tol,
                              double *out);

/**
 * Bound report for a functional id: `aN`, `fs:re,im`, `fsk:k,re,im`,
 * `b2`..`b4`, `t2:n`, `t31`, `t32`.
 *
 * # Safety
 * `f` must be a live handle, `functional` a NUL-terminated string and `out`
 * a valid pointer.
 */
enum OmegaStatus omega_bound(const struct OmegaFunction *f,
                             const char *functional,
                             struct OmegaBoundReport *out);

/**
 * Hill-climbs a functional over generated members; writes the best value
 * found and the bound. `restarts` or `steps` of 0 select the defaults.
 *
 * # Safety
 * `target` must be a NUL-terminated string; `best` and `bound` valid pointers.
 */
enum OmegaStatus omega_search(const char *target,
                              uint64_t seed,
                              size_t restarts,
                              size_t steps,
                              double *best,
                              double *bound);

/**
 * Library version as a static NUL-terminated string.
 */
const char *omega_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OMEGA_CLASS_H */
