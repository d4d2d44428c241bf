#ifndef BOREL_CAPI_H
#define BOREL_CAPI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code for every fallible entry point.
 */
typedef enum BorelStatus {
  BorelStatus_Ok = 0,
  /**
   * Null pointer, malformed UTF-8, or an unknown family/field tag.
   */
  BorelStatus_InvalidArgument = 1,
  /**
   * Structurally well-formed input that fails a mathematical check.
   */
  BorelStatus_ValidationFailed = 2,
} BorelStatus;

/**
 * Opaque handle: a root system together with its Borel nilradical.
 */
typedef struct BorelSystem BorelSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null if none.
 * The returned string is owned by the caller; release it with
 * `borel_string_free`.
 */
char *borel_last_error(void);

/**
 * Releases a string returned by this library. Null is accepted.
 */
void borel_string_free(char *s);

/**
 * Builds the root system and nilradical for `family` (e.g. "A", "G2")
 * at `rank`. On success writes a handle to `out`; release it with
 * `borel_system_free`.
 *
 * # Safety
 * `family` must be a valid NUL-terminated string and `out` a valid
 * pointer.
 */
enum BorelStatus borel_system_new(const char *family, uintptr_t rank, struct BorelSystem **out);

/**
 * Releases a handle from `borel_system_new`. Null is accepted.
 *
 * # Safety
 * `h` must be null or a pointer previously returned by
 * `borel_system_new` that has not been freed.
 */
void borel_system_free(struct BorelSystem *h);

/**
 * Root-system data (Cartan matrix, positive roots, highest root, s) as
 * JSON.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum BorelStatus borel_system_roots_json(const struct BorelSystem *h, char **out);

/**
 * Nilradical bracket table and series data as JSON.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum BorelStatus borel_system_nilradical_json(const struct BorelSystem *h, char **out);

/**
 * Derivation-algebra report as JSON; `dim_bound` caps the solver.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum BorelStatus borel_system_derivations_json(const struct BorelSystem *h,
                                               uintptr_t dim_bound,
                                               char **out);

/**
 * Canonical one-extension families over `field` ("complex" or "real"),
 * as a JSON array.
 *
 * # Safety
 * `h` must be a live handle, `field` a valid NUL-terminated string, and
 * `out` a valid pointer.
 */
enum BorelStatus borel_system_classify_json(const struct BorelSystem *h,
                                            const char *field,
                                            char **out);

/**
 * Builds the solvable extension described by `spec_json` and writes a
 * JSON report with its dimension and certificates.
 *
 * # Safety
 * `spec_json` must be a valid NUL-terminated string and `out` a valid
 * pointer.
 */
enum BorelStatus borel_extend_json(const char *spec_json, char **out);

/**
 * Reduces the extension described by `spec_json` to canonical form and
 * writes the canonical report as JSON. With `diagram_autos` nonzero the
 * result is additionally minimized over diagram automorphisms.
 *
 * # Safety
 * `spec_json` must be a valid NUL-terminated string and `out` a valid
 * pointer.
 */
enum BorelStatus borel_canonicalize_json(const char *spec_json, int32_t diagram_autos, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOREL_CAPI_H */
