#ifndef RBCM_H
#define RBCM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RbcmStatus {
  RBCM_STATUS_OK = 0,
  RBCM_STATUS_VERIFICATION_FAILED = 1,
  RBCM_STATUS_INVALID_INPUT = 2,
  RBCM_STATUS_BUDGET_EXCEEDED = 3,
  RBCM_STATUS_NULL_POINTER = 4,
  RBCM_STATUS_INTERNAL = 5,
} RbcmStatus;

/**
 * Result of `rbcm_classify`.
 */
typedef struct RbcmClassification RbcmClassification;

/**
 * A group `L(n, m, r)`.
 */
typedef struct RbcmGroup RbcmGroup;

/**
 * One classified map; `genus` is meaningful only when `verified`.
 */
typedef struct RbcmSolution {
  uint32_t a;
  uint32_t b;
  uint32_t c;
  uint64_t z1;
  uint64_t z;
  uint64_t w;
  uint64_t u_tilde;
  uint64_t u1;
  uint64_t v1;
  uint64_t t;
  uint64_t d;
  uint64_t ell;
  bool verified;
  uint64_t genus;
} RbcmSolution;

typedef struct RbcmElement {
  uint64_t x;
  uint64_t y;
} RbcmElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last non-zero status on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *rbcm_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void rbcm_string_free(char *s);

/**
 * Classifies the maps on `D(a,b,c)`. `full` selects full verification.
 * Invalid parameters give `InvalidInput`; a failed check gives
 * `VerificationFailed` and still returns the handle.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RbcmStatus rbcm_classify(uint32_t a,
                              uint32_t b,
                              uint32_t c,
                              bool full,
                              struct RbcmClassification **out);

/**
 * # Safety
 * `h` must come from `rbcm_classify` and not be freed twice.
 */
void rbcm_classification_free(struct RbcmClassification *h);

/**
 * Number of solutions, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t rbcm_classification_len(const struct RbcmClassification *h);

/**
 * Whether every requested check passed.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
bool rbcm_classification_ok(const struct RbcmClassification *h);

/**
 * # Safety
 * `h` must be a live handle and `out` valid.
 */
enum RbcmStatus rbcm_classification_get(const struct RbcmClassification *h,
                                        size_t i,
                                        struct RbcmSolution *out);

/**
 * The whole report as JSON; free with `rbcm_string_free`. Null on error.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
char *rbcm_classification_to_json(const struct RbcmClassification *h);

/**
 * The `i`-th verified map in the map-file format; null if out of range.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
char *rbcm_classification_map_json(const struct RbcmClassification *h, size_t i);

/**
 * Checks a map file's contents: skew identity (if a skew table is present),
 * regularity and t-balance. Writes `t` and the genus on success.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_t` and `out_genus` may be null.
 */
enum RbcmStatus rbcm_verify_map_json(const char *json, uint64_t *out_t, uint64_t *out_genus);

/**
 * 2-adic valuation of `u`; -1 stands for infinity (`u = 0`).
 */
int32_t rbcm_deg2(int64_t u);

/**
 * Lifts `s^2 == h (mod 2^e)` to a root modulo `2^target`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RbcmStatus rbcm_sqrt_lift(int64_t s, int64_t h, uint32_t e, uint32_t target, uint64_t *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum RbcmStatus rbcm_group_new(uint64_t n, uint64_t m, uint64_t r, struct RbcmGroup **out);

/**
 * Accepts `Zn`, `Zn x Zm`, `L(n,m,r)` and `D(a,b,c)`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` valid.
 */
enum RbcmStatus rbcm_group_parse(const char *spec, struct RbcmGroup **out);

/**
 * # Safety
 * `g` must come from this library and not be freed twice.
 */
void rbcm_group_free(struct RbcmGroup *g);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
uint64_t rbcm_group_order(const struct RbcmGroup *g);

/**
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
enum RbcmStatus rbcm_group_mul(const struct RbcmGroup *g,
                               struct RbcmElement lhs,
                               struct RbcmElement rhs,
                               struct RbcmElement *out);

/**
 * `e^k` for any integer `k`.
 *
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
enum RbcmStatus rbcm_group_pow(const struct RbcmGroup *g,
                               struct RbcmElement e,
                               int64_t k,
                               struct RbcmElement *out);

/**
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
enum RbcmStatus rbcm_group_inv(const struct RbcmGroup *g,
                               struct RbcmElement e,
                               struct RbcmElement *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RBCM_H */
