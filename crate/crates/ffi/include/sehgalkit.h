#ifndef SEHGALKIT_H
#define SEHGALKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  SK_STATUS_OK = 0,
  SK_STATUS_NULL_POINTER = 1,
  SK_STATUS_INVALID_UTF8 = 2,
  SK_STATUS_INVALID_GROUP = 3,
  SK_STATUS_PARSE = 4,
  SK_STATUS_UNSUPPORTED = 5,
  SK_STATUS_HYPOTHESIS = 6,
  SK_STATUS_TOO_LARGE = 7,
  SK_STATUS_VERIFICATION = 8,
  SK_STATUS_INTERNAL = 9,
} SkStatus;

/**
 * A finite abelian group.
 */
typedef struct SkGroup SkGroup;

/**
 * A split metabelian group `N ⋊ Γ`.
 */
typedef struct SkMetabelian SkMetabelian;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. Owned by
 * the library; valid until the next call.
 */
const char *sk_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void sk_string_free(char *s);

/**
 * Parses a group such as `7^[1,1]x13^[1,1]`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
SkStatus sk_group_parse(const char *spec, SkGroup **out);

/**
 * # Safety
 * `g` must come from [`sk_group_parse`] and not have been freed.
 */
void sk_group_free(SkGroup *g);

/**
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
SkStatus sk_group_order(const SkGroup *g, uint64_t *out);

/**
 * Algorithm 3 on `g`, as JSON.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
SkStatus sk_alg3_json(const SkGroup *g, bool reduce, char **out);

/**
 * `N ⋊ Γ` with `Γ` given as JSON generator matrices, or `"full"`.
 *
 * # Safety
 * `n` must be a live handle, `gamma` NUL-terminated, `out` writable.
 */
SkStatus sk_metabelian_new(const SkGroup *n, const char *gamma, SkMetabelian **out);

/**
 * # Safety
 * `g` must come from [`sk_metabelian_new`] and not have been freed.
 */
void sk_metabelian_free(SkMetabelian *g);

/**
 * Algorithm 1 at prime `p`, as JSON.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
SkStatus sk_alg1_json(const SkMetabelian *g, uint64_t p, char **out);

/**
 * Algorithm 2, as JSON.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
SkStatus sk_alg2_json(const SkMetabelian *g, char **out);

/**
 * The HeLP system for `G_d(p,q)` with its feasible tuples, as JSON.
 *
 * # Safety
 * `out` must be writable.
 */
SkStatus sk_help_json(uint64_t p, uint64_t q, uint64_t d, char **out);

/**
 * Matches table entries for `p` and `q` and builds the first candidate,
 * optionally verifying it. JSON; a failed verification returns
 * [`SkStatus::Verification`] and still writes the report.
 *
 * # Safety
 * `out` must be writable.
 */
SkStatus sk_construct_json(uint64_t p, uint64_t q, bool verify, char **out);

/**
 * The library version, a static string.
 */
const char *sk_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEHGALKIT_H */
