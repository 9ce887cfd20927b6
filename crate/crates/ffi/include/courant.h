#ifndef COURANT_H
#define COURANT_H

#include <stddef.h>
#include <stdint.h>

typedef enum CourantStatus {
  COURANT_STATUS_OK = 0,
  /**
   * The computation ran and an axiom or equation failed.
   */
  COURANT_STATUS_CHECK_FAILED = 1,
  COURANT_STATUS_PARSE_ERROR = 2,
  COURANT_STATUS_INVARIANT_ERROR = 3,
  COURANT_STATUS_INAPPLICABLE = 4,
  COURANT_STATUS_NULL_POINTER = 5,
  COURANT_STATUS_INVALID_UTF8 = 6,
  COURANT_STATUS_BUFFER_TOO_SMALL = 7,
  COURANT_STATUS_OTHER_ERROR = 8,
  COURANT_STATUS_PANIC = 9,
} CourantStatus;

/**
 * Opaque structure handle.
 */
typedef struct CourantSpec CourantSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *courant_last_error(void);

/**
 * Load a structure document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CourantStatus courant_spec_from_json(const char *json, struct CourantSpec **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum CourantStatus courant_make_standard(size_t n, struct CourantSpec **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum CourantStatus courant_make_so3(struct CourantSpec **out);

/**
 * The standard algebroid over `n` variables twisted by a base three-form such
 * as `x1*dx2^dx3^dx4`.
 *
 * # Safety
 * `c` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CourantStatus courant_make_ctwist(size_t n, const char *c, struct CourantSpec **out);

/**
 * Twist `base` by a three-form written in its basis names.
 *
 * # Safety
 * `base` must be a live handle, `b` a NUL-terminated string and `out` a valid pointer.
 */
enum CourantStatus courant_make_twist(const struct CourantSpec *base,
                                      const char *b,
                                      struct CourantSpec **out);

/**
 * # Safety
 * `spec` must be null or a handle returned by this library, freed once.
 */
void courant_spec_free(struct CourantSpec *spec);

/**
 * Rank of the bundle, or 0 for a null handle.
 *
 * # Safety
 * `spec` must be null or a live handle.
 */
size_t courant_spec_rank(const struct CourantSpec *spec);

/**
 * The structure document. Free the string with [`courant_string_free`].
 *
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
enum CourantStatus courant_spec_to_json(const struct CourantSpec *handle, char **out);

/**
 * Run an axiom suite; the JSON report goes to `report`. Returns `CheckFailed`
 * when an axiom fails.
 *
 * # Safety
 * `handle` must be a live handle, `suite` a NUL-terminated string and `report` a valid pointer.
 */
enum CourantStatus courant_verify(const struct CourantSpec *handle,
                                  const char *suite,
                                  uint64_t seed,
                                  char **report);

/**
 * The two-term L∞ equations, twisted packaging when a twist is present.
 *
 * # Safety
 * `handle` must be a live handle and `report` a valid pointer.
 */
enum CourantStatus courant_verify_linfty(const struct CourantSpec *handle,
                                         uint64_t seed,
                                         char **report);

/**
 * Betti numbers in degrees `0..=max_degree` of a point structure, written to
 * `out`; `written` receives the count.
 *
 * # Safety
 * `handle` must be a live handle, `out` must hold `capacity` values and `written` be valid.
 */
enum CourantStatus courant_betti(const struct CourantSpec *handle,
                                 size_t max_degree,
                                 size_t *out,
                                 size_t capacity,
                                 size_t *written);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void courant_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COURANT_H */
