#ifndef SOBOLEV_CHARLIER_H
#define SOBOLEV_CHARLIER_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SckStatus {
  SCK_STATUS_OK = 0,
  /**
   * A verified identity did not hold.
   */
  SCK_STATUS_IDENTITY_FAILURE = 1,
  SCK_STATUS_INVALID_ARGUMENT = 2,
  SCK_STATUS_NULL_POINTER = 3,
  SCK_STATUS_PARSE_ERROR = 4,
  SCK_STATUS_DIVISION_BY_ZERO = 5,
  SCK_STATUS_CONVERGENCE_FAILURE = 6,
  /**
   * The output buffer was too short; the required length was still written.
   */
  SCK_STATUS_BUFFER_TOO_SMALL = 7,
  SCK_STATUS_INTERNAL = 99,
} SckStatus;

/**
 * Opaque polynomial with exact rational coefficients.
 */
typedef struct SckPoly SckPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread; do not free it.
 */
const char *sck_last_error_message(void);

/**
 * Builds `Q_n^λ` for parameters given as rational strings.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum SckStatus sck_sobolev_poly_new(size_t n,
                                    const char *a,
                                    const char *c,
                                    const char *lambda,
                                    struct SckPoly **out);

/**
 * Builds the monic Charlier polynomial `C_n`.
 *
 * # Safety
 * As for `sck_sobolev_poly_new`.
 */
enum SckStatus sck_charlier_poly_new(size_t n, const char *a, struct SckPoly **out);

/**
 * Builds the large-mass limit polynomial `G_n`.
 *
 * # Safety
 * As for `sck_sobolev_poly_new`.
 */
enum SckStatus sck_limit_poly_new(size_t n, const char *a, const char *c, struct SckPoly **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `p` must come from one of the constructors and not be freed twice.
 */
void sck_poly_free(struct SckPoly *p);

/**
 * Degree of the polynomial, or -1 for null or the zero polynomial.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
int64_t sck_poly_degree(const struct SckPoly *p);

/**
 * Coefficient of `x^k` as `"p/q"`, written into `buf` of capacity `cap`.
 * Pass a null `buf` to query the length through `len_out`.
 *
 * # Safety
 * `buf` must hold `cap` bytes; `len_out` may be null.
 */
enum SckStatus sck_poly_coeff_string(const struct SckPoly *p,
                                     size_t k,
                                     char *buf,
                                     size_t cap,
                                     size_t *len_out);

/**
 * JSON object `{"degree", "coeffs", "norm_sq"}` as a newly allocated string.
 * Release with `sck_string_free`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum SckStatus sck_poly_to_json(const struct SckPoly *p, char **out);

/**
 * Evaluates exactly at the rational `x` and rounds the result to `f64`.
 *
 * # Safety
 * `p` must be a live handle, `x` a C string and `out` writable.
 */
enum SckStatus sck_poly_eval_f64(const struct SckPoly *p, const char *x, double *out);

/**
 * Roots as interleaved `(re, im)` pairs in `buf` (capacity `cap` doubles),
 * sorted by real part. `count_out` receives the number of roots; a short
 * buffer returns `BufferTooSmall` with the count still set.
 *
 * # Safety
 * `buf` must hold `cap` doubles; `count_out` must be writable.
 */
enum SckStatus sck_poly_roots(const struct SckPoly *p, double *buf, size_t cap, size_t *count_out);

/**
 * The critical mass `λ₀` of `Q_n` as a double.
 *
 * # Safety
 * `a`, `c` must be C strings; `out` writable.
 */
enum SckStatus sck_lambda0(size_t n, const char *a, const char *c, double *out);

/**
 * Runs identity suites (`"all"` or a comma list) and optionally returns the
 * JSON report through `report_out` (free with `sck_string_free`). Returns
 * `IdentityFailure` if any check failed.
 *
 * # Safety
 * `suites` must be a C string; `report_out` may be null.
 */
enum SckStatus sck_verify_suite(const char *suites,
                                size_t n_max,
                                size_t trials,
                                uint64_t seed,
                                char **report_out);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sck_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOBOLEV_CHARLIER_H */
