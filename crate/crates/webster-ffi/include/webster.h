#ifndef WEBSTER_H
#define WEBSTER_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WebsterStatus {
  WEBSTER_STATUS_OK = 0,
  WEBSTER_STATUS_NULL_POINTER = 1,
  WEBSTER_STATUS_INVALID_ARGUMENT = 2,
  WEBSTER_STATUS_PARSE_ERROR = 3,
  WEBSTER_STATUS_INVALID_UTF8 = 4,
  WEBSTER_STATUS_MISMATCH = 5,
  WEBSTER_STATUS_CHECKS_FAILED = 6,
  WEBSTER_STATUS_PANIC = 7,
} WebsterStatus;

/**
 * An algebra W(n,1) over F_p together with its bimodule context.
 */
typedef struct WebsterAlgebra WebsterAlgebra;

/**
 * An element of a `WebsterAlgebra`.
 */
typedef struct WebsterElement WebsterElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *webster_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void webster_string_free(char *s);

/**
 * Create the algebra for `n` red strands over F_p.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum WebsterStatus webster_algebra_new(size_t n, uint64_t p, struct WebsterAlgebra **out);

/**
 * # Safety
 * `h` must be NULL or a handle from `webster_algebra_new`, not yet freed.
 */
void webster_algebra_free(struct WebsterAlgebra *h);

/**
 * Number of normal-form basis elements of internal degree `degree`.
 *
 * # Safety
 * `h` and `out` must be valid pointers.
 */
enum WebsterStatus webster_basis_dim(const struct WebsterAlgebra *h, int64_t degree, size_t *out);

/**
 * Parse an algebra element such as `psi2*psi2*e1` and reduce it to normal form.
 *
 * # Safety
 * `h` and `out` must be valid pointers, `text` a NUL-terminated string.
 */
enum WebsterStatus webster_element_parse(const struct WebsterAlgebra *h,
                                         const char *text,
                                         struct WebsterElement **out);

/**
 * # Safety
 * `e` must be NULL or an element handle, not yet freed.
 */
void webster_element_free(struct WebsterElement *e);

/**
 * `*out = a * b`.
 *
 * # Safety
 * All pointers must be valid; `a` and `b` must come from the same algebra handle.
 */
enum WebsterStatus webster_element_mul(const struct WebsterElement *a,
                                       const struct WebsterElement *b,
                                       struct WebsterElement **out);

/**
 * `*out = a + b`.
 *
 * # Safety
 * All pointers must be valid; `a` and `b` must come from the same algebra handle.
 */
enum WebsterStatus webster_element_add(const struct WebsterElement *a,
                                       const struct WebsterElement *b,
                                       struct WebsterElement **out);

/**
 * `*out = d(a)`, the p-differential.
 *
 * # Safety
 * `a` and `out` must be valid pointers.
 */
enum WebsterStatus webster_element_differential(const struct WebsterElement *a,
                                                struct WebsterElement **out);

/**
 * Whether two elements are equal.
 *
 * # Safety
 * All pointers must be valid.
 */
enum WebsterStatus webster_element_equal(const struct WebsterElement *a,
                                         const struct WebsterElement *b,
                                         bool *out);

/**
 * Canonical text of an element; free with `webster_string_free`.
 *
 * # Safety
 * `a` and `out` must be valid pointers.
 */
enum WebsterStatus webster_element_to_string(const struct WebsterElement *a, char **out);

/**
 * Run verification suites and return the JSON report in `*report_json`
 * (free with `webster_string_free`). `checks` is a comma-separated list or
 * NULL for all suites. Returns `WEBSTER_STATUS_CHECKS_FAILED` when the
 * report was produced but some check failed.
 *
 * # Safety
 * `report_json` must be valid; `checks` NULL or a NUL-terminated string.
 */
enum WebsterStatus webster_run_checks(size_t n,
                                      uint64_t p,
                                      uint32_t window,
                                      uint64_t seed,
                                      const char *checks,
                                      size_t corpus_size,
                                      char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEBSTER_H */
