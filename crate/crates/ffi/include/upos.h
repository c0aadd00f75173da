#ifndef UPOS_H
#define UPOS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes; values are stable.
 */
typedef enum UposStatus {
  UPOS_STATUS_OK = 0,
  /**
   * The polynomial is negative somewhere on the domain; a witness was produced.
   */
  UPOS_STATUS_NOT_POSITIVE = 2,
  /**
   * Verification rejected the certificate.
   */
  UPOS_STATUS_REJECTED = 3,
  UPOS_STATUS_PARSE_ERROR = 10,
  /**
   * A null pointer, invalid UTF-8, or an empty interval was passed.
   */
  UPOS_STATUS_INVALID_ARGUMENT = 11,
  UPOS_STATUS_UNSUPPORTED = 12,
  UPOS_STATUS_NOT_SQUARE_FREE = 13,
  UPOS_STATUS_PRECISION_EXHAUSTED = 14,
  UPOS_STATUS_INTERNAL = 20,
} UposStatus;

typedef enum UposDomain {
  UPOS_DOMAIN_REAL = 0,
  UPOS_DOMAIN_HALF_LINE = 1,
  UPOS_DOMAIN_INTERVAL = 2,
} UposDomain;

/**
 * Opaque certificate envelope (any kind, including witnesses).
 */
typedef struct UposCertificate UposCertificate;

/**
 * Opaque polynomial with rational coefficients.
 */
typedef struct UposPoly UposPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an expression such as `x^4 - 2/3*x + 1` or an ascending coefficient list.
 *
 * # Safety
 * `text_ptr` must be a NUL-terminated string and `out` a valid pointer.
 */
enum UposStatus upos_poly_parse(const char *text_ptr, struct UposPoly **out);

/**
 * Degree of the polynomial, or -1 for the zero polynomial or a null handle.
 *
 * # Safety
 * `p` must be null or a live handle from [`upos_poly_parse`].
 */
ptrdiff_t upos_poly_degree(const struct UposPoly *p);

/**
 * # Safety
 * `p` must be null or a live handle; it is invalid afterwards.
 */
void upos_poly_free(struct UposPoly *p);

/**
 * Weighted SOS certificate on the domain. `a` and `b` are rational strings, read
 * only for [`UposDomain::Interval`]. On `NotPositive` the handle holds a witness.
 *
 * # Safety
 * `p` must be a live handle, `out` a valid pointer, and `a`, `b` NUL-terminated
 * strings when the domain is an interval.
 */
enum UposStatus upos_certify(const struct UposPoly *p,
                             enum UposDomain domain,
                             const char *a,
                             const char *b,
                             struct UposCertificate **out);

/**
 * Perturbed two-square certificate on ℝ; requires even degree.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum UposStatus upos_certify_pert(const struct UposPoly *p, struct UposCertificate **out);

/**
 * `Ok` when the certificate is exactly valid for `p`, `Rejected` otherwise.
 *
 * # Safety
 * Both handles must be live.
 */
enum UposStatus upos_verify(const struct UposPoly *p, const struct UposCertificate *c);

/**
 * Canonical JSON; release with [`upos_string_free`]. Null on a null handle.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
char *upos_certificate_to_json(const struct UposCertificate *c);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum UposStatus upos_certificate_from_json(const char *json, struct UposCertificate **out);

/**
 * Static string such as `"wsos-R"`; null on a null handle.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
const char *upos_certificate_kind(const struct UposCertificate *c);

/**
 * # Safety
 * `c` must be null or a live handle; it is invalid afterwards.
 */
void upos_certificate_free(struct UposCertificate *c);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void upos_string_free(char *s);

/**
 * Message of the last failure on this thread; empty after a success. Valid until the
 * next call into the library from the same thread.
 */
const char *upos_last_error(void);

const char *upos_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UPOS_H */
