#ifndef ISOGROUP_H
#define ISOGROUP_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum IsoStatus {
  ISO_STATUS_OK = 0,
  ISO_STATUS_NULL_POINTER = 1,
  ISO_STATUS_INVALID_UTF8 = 2,
  ISO_STATUS_PARSE = 3,
  ISO_STATUS_INVALID_SPEC = 4,
  ISO_STATUS_BAD_MODULUS = 5,
  ISO_STATUS_NOT_COPRIME = 6,
  ISO_STATUS_CAP_EXCEEDED = 7,
  ISO_STATUS_CONVERGENCE_FAILURE = 8,
  ISO_STATUS_INCOMPATIBLE = 9,
  ISO_STATUS_OUT_OF_RANGE = 10,
  ISO_STATUS_INTERNAL = 11,
} IsoStatus;

/**
 * Opaque finite quotient `G_N`.
 */
typedef struct IsoQuotient IsoQuotient;

/**
 * Opaque group specification.
 */
typedef struct IsoSpec IsoSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *iso_last_error(void);

/**
 * Looks up a catalog group by name (with or without the `catalog:` prefix).
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a writable pointer.
 */
enum IsoStatus iso_spec_from_catalog(const char *name, struct IsoSpec **out);

/**
 * Parses a group spec from its JSON form and validates it.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum IsoStatus iso_spec_from_json(const char *json, struct IsoSpec **out);

/**
 * # Safety
 * `spec` must come from this library and not be used afterwards.
 */
void iso_spec_free(struct IsoSpec *spec);

/**
 * Writes m₀ of the group.
 *
 * # Safety
 * `spec` must be a live handle and `out` a writable pointer.
 */
enum IsoStatus iso_spec_m0(const struct IsoSpec *spec, uint64_t *out);

/**
 * Serializes the spec as JSON.
 *
 * # Safety
 * `spec` must be a live handle and `out` a writable pointer.
 */
enum IsoStatus iso_spec_to_json(const struct IsoSpec *spec, char **out);

/**
 * Materializes `G_N`.
 *
 * # Safety
 * `spec` must be a live handle and `out` a writable pointer.
 */
enum IsoStatus iso_quotient_build(const struct IsoSpec *spec, uint64_t n, struct IsoQuotient **out);

/**
 * # Safety
 * `q` must come from this library and not be used afterwards.
 */
void iso_quotient_free(struct IsoQuotient *q);

/**
 * Order of the quotient, or 0 for a null handle.
 *
 * # Safety
 * `q` must be null or a live handle.
 */
size_t iso_quotient_order(const struct IsoQuotient *q);

/**
 * Index of the identity element.
 *
 * # Safety
 * `q` must be a live handle and `out` a writable pointer.
 */
enum IsoStatus iso_quotient_identity(const struct IsoQuotient *q, size_t *out);

/**
 * Product of two element indices.
 *
 * # Safety
 * `q` must be a live handle and `out` a writable pointer.
 */
enum IsoStatus iso_quotient_mul(const struct IsoQuotient *q, size_t a, size_t b, size_t *out);

/**
 * Inverse of an element index.
 *
 * # Safety
 * `q` must be a live handle and `out` a writable pointer.
 */
enum IsoStatus iso_quotient_inverse(const struct IsoQuotient *q, size_t a, size_t *out);

/**
 * Normal form `{n, f, p}` of an element, as JSON.
 *
 * # Safety
 * `q` must be a live handle and `out` a writable pointer.
 */
enum IsoStatus iso_quotient_element_json(const struct IsoQuotient *q, size_t a, char **out);

/**
 * Wave-label atlas of `G_N` as JSON.
 *
 * # Safety
 * `spec` must be a live handle and `out` a writable pointer.
 */
enum IsoStatus iso_dual_atlas_json(const struct IsoSpec *spec,
                                   uint64_t n,
                                   uint64_t seed,
                                   char **out);

/**
 * Splitting certificate for `N = m·n` as JSON.
 *
 * # Safety
 * `spec` must be a live handle and `out` a writable pointer.
 */
enum IsoStatus iso_split_json(const struct IsoSpec *spec, uint64_t m, uint64_t n, char **out);

/**
 * Invariant-suite report as JSON. Failing checks are data, not errors.
 *
 * # Safety
 * `spec` must be a live handle and `out` a writable pointer.
 */
enum IsoStatus iso_verify_json(const struct IsoSpec *spec, uint64_t seed, char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library not freed before.
 */
void iso_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISOGROUP_H */
