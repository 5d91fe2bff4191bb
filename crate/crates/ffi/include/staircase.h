/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef STAIRCASE_H
#define STAIRCASE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum StcStatus {
  STC_STATUS_OK = 0,
  STC_STATUS_NULL_POINTER = 1,
  STC_STATUS_PARSE = 2,
  STC_STATUS_DOMAIN = 3,
  STC_STATUS_NO_SOLUTION = 4,
  STC_STATUS_INVALID = 5,
  STC_STATUS_DEGENERATE = 6,
  STC_STATUS_ARITHMETIC = 7,
  STC_STATUS_PANIC = 8,
} StcStatus;

typedef enum StcLiveness {
  STC_LIVENESS_LIVE = 0,
  STC_LIVENESS_UNKNOWN = 1,
} StcLiveness;

// A quasi-perfect class `(d, m, p, q, t, eps)`.
typedef struct StcClass StcClass;

// A pre-staircase with its generated steps.
typedef struct StcStaircase StcStaircase;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Free with `stc_string_free`.
char *stc_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` is null or was returned by this library and not freed before.
void stc_string_free(char *s);

// Library version as a static string.
const char *stc_version(void);

// The class with center `p/q` (decimal integers).
//
// # Safety
// `p`, `q` are NUL-terminated strings; `out` is writable.
enum StcStatus stc_class_from_pq(const char *p, const char *q, struct StcClass **out);

// A class from its coordinates; the identities are checked.
//
// # Safety
// All string arguments are NUL-terminated; `out` is writable.
enum StcStatus stc_class_new(const char *d,
                             const char *m,
                             const char *p,
                             const char *q,
                             const char *t,
                             int32_t eps,
                             struct StcClass **out);

// # Safety
// `c` is null or a handle from this library not freed before.
void stc_class_free(struct StcClass *c);

// `"(d,m,p,q,t,±1)"`, or null for a null handle.
//
// # Safety
// `c` is null or a live handle.
char *stc_class_to_string(const struct StcClass *c);

// One coordinate as a decimal string: `index` 0..=4 selects d, m, p, q, t.
//
// # Safety
// `c` is a live handle; `out` is writable.
enum StcStatus stc_class_coord(const struct StcClass *c, uint32_t index, char **out);

// # Safety
// `c` is null or a live handle.
int32_t stc_class_eps(const struct StcClass *c);

// Certifies the class as exceptional by Cremona reduction.
//
// # Safety
// `c` is a live handle; `out` is writable.
enum StcStatus stc_class_is_perfect(const struct StcClass *c, bool *out);

// # Safety
// `c` is a live handle; `out` is writable.
enum StcStatus stc_class_is_center_blocking(const struct StcClass *c, bool *out);

// `T^♯(c)` for a symmetry written as `"S^2 R"`, `"R_{v_3}"`, ...
//
// # Safety
// `c` is a live handle; `symmetry` is NUL-terminated; `out` is writable.
enum StcStatus stc_class_apply(const struct StcClass *c,
                               const char *symmetry,
                               struct StcClass **out);

// Builds `T^♯(S^base)_{dir,n}` with `steps` recursion steps after the two seeds.
// `base` is `"U"` or `"L"`, `dir` is `"l"` or `"u"`.
//
// # Safety
// String arguments are NUL-terminated; `out` is writable.
enum StcStatus stc_staircase_build(const char *symmetry,
                                   const char *base,
                                   int64_t n,
                                   const char *dir,
                                   size_t steps,
                                   struct StcStaircase **out);

// # Safety
// `s` is null or a handle from this library not freed before.
void stc_staircase_free(struct StcStaircase *s);

// Number of steps including the two seeds; 0 for a null handle.
//
// # Safety
// `s` is null or a live handle.
size_t stc_staircase_len(const struct StcStaircase *s);

// Copy of step `k`.
//
// # Safety
// `s` is a live handle; `out` is writable.
enum StcStatus stc_staircase_step(const struct StcStaircase *s, size_t k, struct StcClass **out);

// Exact limits as strings such as `"7/2+5/6*sqrt(21)"`.
//
// # Safety
// `s` is a live handle; `z_inf`, `b_inf` are writable.
enum StcStatus stc_staircase_limits(const struct StcStaircase *s, char **z_inf, char **b_inf);

// Sufficient liveness test; steps are Cremona-certified first.
//
// # Safety
// `s` is a live handle; `out` is writable.
enum StcStatus stc_staircase_liveness(const struct StcStaircase *s, enum StcLiveness *out);

// `acc(b)` for a rational `b` such as `"1/3"`, as an exact string.
//
// # Safety
// `b` is NUL-terminated; `out` is writable.
enum StcStatus stc_acc(const char *b, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STAIRCASE_H */
