#ifndef BOUNDQUIVER_H
#define BOUNDQUIVER_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BqStatus {
  BQ_STATUS_OK = 0,
  BQ_STATUS_NULL_POINTER = 1,
  BQ_STATUS_INVALID_UTF8 = 2,
  BQ_STATUS_PARSE_ERROR = 3,
  BQ_STATUS_INVALID_INPUT = 4,
  /**
   * The computation ran but the claim did not verify.
   */
  BQ_STATUS_NOT_VERIFIED = 5,
  BQ_STATUS_BUFFER_TOO_SMALL = 6,
  BQ_STATUS_INTERNAL = 7,
} BqStatus;

/**
 * A bound quiver together with its algebra basis.
 */
typedef struct BqQuiver BqQuiver;

/**
 * A representation of a particular [`BqQuiver`].
 */
typedef struct BqRep BqRep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *bq_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bq_version(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void bq_string_free(char *s);

/**
 * Parses a quiver spec document.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum BqStatus bq_quiver_parse(const char *spec, struct BqQuiver **out);

/**
 * The built-in Bondal quiver.
 *
 * # Safety
 * `out` must be writable.
 */
enum BqStatus bq_quiver_bondal(struct BqQuiver **out);

/**
 * # Safety
 * `q` must come from this library and not have been freed.
 */
void bq_quiver_free(struct BqQuiver *q);

/**
 * # Safety
 * `q` must be a live handle; `out` must be writable.
 */
enum BqStatus bq_quiver_vertex_count(const struct BqQuiver *q, size_t *out);

/**
 * Dimension of the quotient algebra.
 *
 * # Safety
 * `q` must be a live handle; `out` must be writable.
 */
enum BqStatus bq_algebra_dimension(const struct BqQuiver *q, size_t *out);

/**
 * Writes the Gram matrix of the Euler form, row-major, into `out[0..n*n]`.
 *
 * # Safety
 * `q` must be a live handle; `out` must have room for `len` values.
 */
enum BqStatus bq_gram_matrix(const struct BqQuiver *q, int64_t *out, size_t len);

/**
 * Parses a representation file against `q`. The `quiver` header line is required but its path is ignored.
 *
 * # Safety
 * `q` must be a live handle, `text` NUL-terminated, `out` writable.
 */
enum BqStatus bq_rep_parse(const struct BqQuiver *q,
                           const char *text,
                           struct BqRep **out);

/**
 * # Safety
 * `r` must come from this library and not have been freed.
 */
void bq_rep_free(struct BqRep *r);

/**
 * Writes the dimension vector into `out[0..n]`.
 *
 * # Safety
 * `r` must be a live handle; `out` must have room for `len` values.
 */
enum BqStatus bq_rep_dimension_vector(const struct BqRep *r, size_t *out, size_t len);

/**
 * `dim Ext^k(M, N)`.
 *
 * # Safety
 * `m`, `n` must be live handles; `out` writable.
 */
enum BqStatus bq_ext_dim(const struct BqRep *m, const struct BqRep *n, size_t k, size_t *out);

/**
 * `Σ (-1)^k dim Ext^k(M, N)`.
 *
 * # Safety
 * `m`, `n` must be live handles; `out` writable.
 */
enum BqStatus bq_euler_char(const struct BqRep *m, const struct BqRep *n, int64_t *out);

/**
 * Nonextendability report for the class `class[0..len]` as JSON.
 * Returns `Ok` when both sides are proved, `NotVerified` otherwise; the JSON is written in both cases.
 *
 * # Safety
 * `q` must be a live handle, `class` readable for `len` values, `json_out` writable.
 */
enum BqStatus bq_certify_nonext(const struct BqQuiver *q,
                                const int64_t *class_,
                                size_t len,
                                uint64_t bound,
                                uint64_t modulus_cap,
                                char **json_out);

/**
 * Jordan–Hölder report with built-in candidates as JSON; `Ok` when a violation is witnessed.
 *
 * # Safety
 * `q` must be a live handle; `json_out` writable.
 */
enum BqStatus bq_certify_jh(const struct BqQuiver *q,
                            uint64_t bound,
                            uint64_t modulus_cap,
                            char **json_out);

/**
 * Replays every certificate found in a JSON document against the Gram matrix of `q`.
 *
 * # Safety
 * `q` must be a live handle; `json` NUL-terminated.
 */
enum BqStatus bq_verify_certificates(const struct BqQuiver *q, const char *json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOUNDQUIVER_H */
