#ifndef HARMCONV_H
#define HARMCONV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_POINTER = 1,
  HC_STATUS_INVALID_PARAMETER = 2,
  HC_STATUS_MAP_SPEC = 3,
  HC_STATUS_DENOMINATOR_VANISHES = 4,
  HC_STATUS_NORMALIZATION_MISMATCH = 5,
  HC_STATUS_INCONCLUSIVE = 6,
  HC_STATUS_NUMERICAL = 7,
  HC_STATUS_BUFFER_TOO_SMALL = 8,
  HC_STATUS_PANIC = 9,
} HcStatus;

/**
 * Opaque harmonic mapping `h + conj(g)` stored as truncated series.
 */
typedef struct HcMap HcMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *hc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hc_version(void);

/**
 * Builds a mapping from a map-spec string such as `"conv(f0, fa(a=0.5))"`
 * truncated at `order`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HcStatus hc_map_from_spec(const char *spec, size_t order, struct HcMap **out);

/**
 * Harmonic (Hadamard) convolution of two mappings as a new handle.
 *
 * # Safety
 * `f` and `other` must be live handles and `out` a valid pointer.
 */
enum HcStatus hc_map_convolve(const struct HcMap *f, const struct HcMap *other, struct HcMap **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `f` must be null or a handle not yet freed.
 */
void hc_map_free(struct HcMap *f);

/**
 * Truncation order of the mapping, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
size_t hc_map_order(const struct HcMap *f);

/**
 * `f(z) = h(z) + conj(g(z))`.
 *
 * # Safety
 * `f` must be a live handle; `out_re` and `out_im` valid pointers.
 */
enum HcStatus hc_map_eval(const struct HcMap *f,
                          double re,
                          double im,
                          double *out_re,
                          double *out_im);

/**
 * Dilatation `g'/h'` at `z` from the quotient series of the mapping.
 *
 * # Safety
 * `f` must be a live handle; `out_re` and `out_im` valid pointers.
 */
enum HcStatus hc_map_dilatation(const struct HcMap *f,
                                double re,
                                double im,
                                double *out_re,
                                double *out_im);

/**
 * Jacobian `|h'|² - |g'|²` at `z`.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum HcStatus hc_map_jacobian(const struct HcMap *f, double re, double im, double *out);

/**
 * Copies the coefficients of `h` and `g` as interleaved `(re, im)` pairs,
 * index 0 first. Each buffer must hold `2 * (order + 1)` doubles; `len` is
 * that capacity in doubles. Either buffer may be null to skip it.
 *
 * # Safety
 * Non-null buffers must be valid for `len` writes.
 */
enum HcStatus hc_map_coeffs(const struct HcMap *f, double *h_out, double *g_out, size_t len);

/**
 * Number of zeros in `|z| < 1` of the polynomial with `n` coefficients
 * given as interleaved `(re, im)` pairs, constant term first.
 *
 * # Safety
 * `coeffs` must be valid for `2 * n` reads and `out` a valid pointer.
 */
enum HcStatus hc_roots_in_disk(const double *coeffs, size_t n, size_t *out);

/**
 * Runs the Möbius-case verification on the default grid. Writes the JSON
 * report to `*out_json` and the CLI exit code (0 or 1) to `*exit_code` when
 * that pointer is non-null.
 *
 * # Safety
 * `out_json` must be a valid pointer; `exit_code` valid or null.
 */
enum HcStatus hc_verify_mobius(double a,
                               double theta,
                               double gamma,
                               char **out_json,
                               int32_t *exit_code);

/**
 * Verification for the half-plane mapping of direction `gamma1` with
 * dilatation `e^{iθ}z^n`, convolved with `f^a_γ`.
 *
 * # Safety
 * As [`hc_verify_mobius`].
 */
enum HcStatus hc_verify_half_plane(uint32_t n,
                                   double theta,
                                   double gamma1,
                                   double gamma,
                                   double a,
                                   char **out_json,
                                   int32_t *exit_code);

/**
 * Verification for the strip mapping onto `Ω_β` with dilatation
 * `e^{iθ}z^n`, convolved with `f^a_γ`.
 *
 * # Safety
 * As [`hc_verify_mobius`].
 */
enum HcStatus hc_verify_strip(uint32_t n,
                              double theta,
                              double beta,
                              double gamma,
                              double a,
                              char **out_json,
                              int32_t *exit_code);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void hc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARMCONV_H */
