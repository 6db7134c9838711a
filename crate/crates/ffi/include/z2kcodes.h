#ifndef Z2KCODES_H
#define Z2KCODES_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum Z2kStatus {
  Z2K_STATUS_OK = 0,
  Z2K_STATUS_NULL_POINTER = 1,
  Z2K_STATUS_INVALID_ARGUMENT = 2,
  Z2K_STATUS_INVALID_LENGTH = 3,
  Z2K_STATUS_OUT_OF_RANGE = 4,
  Z2K_STATUS_DOMAIN = 5,
  Z2K_STATUS_TOO_LARGE = 6,
  Z2K_STATUS_SEARCH_EXHAUSTED = 7,
  Z2K_STATUS_PARSE = 8,
  Z2K_STATUS_PANIC = 9,
} Z2kStatus;

// A free code over `Z/2kZ`.
typedef struct Z2kCode Z2kCode;

// Forced coefficients of an extremal theta series for one `(n, k)`.
typedef struct Z2kProfile Z2kProfile;

// A truncated power series in `t^{1/D}` with rational coefficients.
typedef struct Z2kSeries Z2kSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until
// the next failing call on the same thread.
const char *z2k_last_error(void);

// Release a string returned by this library.
//
// # Safety
// `s` must be null or a pointer obtained from this library that has not
// been freed.
void z2k_string_free(char *s);

// `E4` truncated at `t^terms`.
//
// # Safety
// `out` must be valid for writes.
enum Z2kStatus z2k_e4_new(size_t terms, struct Z2kSeries **out);

// `theta_1 = f_0^8` for `k`, truncated at `t^terms`.
//
// # Safety
// `out` must be valid for writes.
enum Z2kStatus z2k_theta1_new(uint32_t k, size_t terms, struct Z2kSeries **out);

// # Safety
// `series` must be null or a live handle from this library.
void z2k_series_free(struct Z2kSeries *series);

// Grid denominator `D` and number of stored grid points.
//
// # Safety
// `series` must be a live handle; `denom` and `len` must be valid for writes.
enum Z2kStatus z2k_series_shape(const struct Z2kSeries *series, uint32_t *denom, size_t *len);

// Coefficient at grid index `index` (exponent `index / D`) as a decimal
// string `p` or `p/q`.
//
// # Safety
// `series` must be a live handle; `out` must be valid for writes.
enum Z2kStatus z2k_series_coeff(const struct Z2kSeries *series, size_t index, char **out);

// The series in the line-oriented golden format.
//
// # Safety
// `series` must be a live handle; `out` must be valid for writes.
enum Z2kStatus z2k_series_to_text(const struct Z2kSeries *series, char **out);

// Forced coefficients for length `n` over `Z/2kZ`.
//
// # Safety
// `out` must be valid for writes.
enum Z2kStatus z2k_profile_new(uint64_t n, uint32_t k, struct Z2kProfile **out);

// # Safety
// `profile` must be null or a live handle from this library.
void z2k_profile_free(struct Z2kProfile *profile);

// `mu`, `nu` and the threshold `24 mu - 240 nu + 744`.
//
// # Safety
// `profile` must be a live handle; the outputs must be valid for writes.
enum Z2kStatus z2k_profile_dims(const struct Z2kProfile *profile,
                                uint64_t *mu,
                                uint64_t *nu,
                                int64_t *threshold);

// `beta1` (`which = 1`) or `beta2` (`which = 2`) as a decimal string.
//
// # Safety
// `profile` must be a live handle; `out` must be valid for writes.
enum Z2kStatus z2k_profile_beta(const struct Z2kProfile *profile, uint32_t which, char **out);

// `b_{2s}` as a decimal string, for `s <= mu + 2`.
//
// # Safety
// `profile` must be a live handle; `out` must be valid for writes.
enum Z2kStatus z2k_profile_b(const struct Z2kProfile *profile, size_t s, char **out);

// Least `n` in `[from, to]` with `beta2 < 0`; `*found` is 0 when there is none.
//
// # Safety
// `found` and `n` must be valid for writes.
enum Z2kStatus z2k_crossover(uint32_t k, uint64_t from, uint64_t to, uint8_t *found, uint64_t *n);

// Whether `beta1 > 0` and the positivity certificate holds at `(n, k)`.
//
// # Safety
// `pass` must be valid for writes.
enum Z2kStatus z2k_certificate(uint64_t n, uint32_t k, uint8_t *pass);

// Saddle point of `F` (`theta_k = 0`) or of `F theta_1^3` for
// `theta_k = k`, and the resulting ratio limit, as doubles.
//
// # Safety
// All outputs must be valid for writes.
enum Z2kStatus z2k_saddle(uint32_t digits,
                          uint32_t theta_k,
                          double *y0,
                          double *c1,
                          double *c2,
                          double *limit);

// A length-8 Type II code over `Z/2kZ` for `k <= 6`.
//
// # Safety
// `out` must be valid for writes.
enum Z2kStatus z2k_code_search(uint32_t k, uint64_t seed, struct Z2kCode **out);

// Parse a code file (`zcode k n r` then `r` rows).
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be valid for writes.
enum Z2kStatus z2k_code_parse(const char *text, struct Z2kCode **out);

// # Safety
// `code` must be null or a live handle from this library.
void z2k_code_free(struct Z2kCode *code);

// Code file text for `code`.
//
// # Safety
// `code` must be a live handle; `out` must be valid for writes.
enum Z2kStatus z2k_code_to_text(const struct Z2kCode *code, char **out);

// Type II check by enumeration. `*d_e` is 0 for the zero code.
//
// # Safety
// `code` must be a live handle; the outputs must be valid for writes.
enum Z2kStatus z2k_code_verify(const struct Z2kCode *code, uint8_t *type2, uint64_t *d_e);

// Theta series of `A_{2k}(C)` by substitution into the weight enumerator,
// truncated at `t^terms`.
//
// # Safety
// `code` must be a live handle; `out` must be valid for writes.
enum Z2kStatus z2k_code_theta(const struct Z2kCode *code, size_t terms, struct Z2kSeries **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* Z2KCODES_H */
