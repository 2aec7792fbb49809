#ifndef IHOMOG_H
#define IHOMOG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum IhomogStatus {
  /**
   * All conditions hold; the report is written.
   */
  IHOMOG_STATUS_OK = 0,
  /**
   * A condition fails; the report (with witness) is still written.
   */
  IHOMOG_STATUS_CONDITIONS_FAILED = 1,
  /**
   * The JSON, a rational, a dimension or a parameter is invalid.
   */
  IHOMOG_STATUS_INVALID_INPUT = 2,
  IHOMOG_STATUS_NULL_POINTER = 3,
  /**
   * The built algebra has a center, so the model is not realized.
   */
  IHOMOG_STATUS_UNSUPPORTED = 4,
  /**
   * A panic was caught at the boundary.
   */
  IHOMOG_STATUS_INTERNAL = 5,
} IhomogStatus;

/**
 * Opaque parsed instance.
 */
typedef struct IhomogInstance IhomogInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates an instance from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum IhomogStatus ihomog_instance_from_json(const char *json, struct IhomogInstance **out);

/**
 * Loads a bundled corpus instance by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a writable pointer.
 */
enum IhomogStatus ihomog_instance_from_corpus(const char *name, struct IhomogInstance **out);

/**
 * Serializes the instance back to JSON.
 *
 * # Safety
 * `inst` must come from this library and `out` must be writable.
 */
enum IhomogStatus ihomog_instance_to_json(const struct IhomogInstance *inst, char **out);

/**
 * # Safety
 * `inst` must come from this library (or be null) and must not be used afterwards.
 */
void ihomog_instance_free(struct IhomogInstance *inst);

/**
 * Runs the certificate; `use_generators` adds the group-level checks.
 *
 * # Safety
 * `inst` must come from this library and `out_json` must be writable.
 */
enum IhomogStatus ihomog_check(const struct IhomogInstance *inst,
                               bool use_generators,
                               char **out_json);

/**
 * Builds the Lie algebra; a failed Jacobi identity or a membership failure gives
 * `ConditionsFailed` with the report still written.
 *
 * # Safety
 * `inst` must come from this library and `out_json` must be writable.
 */
enum IhomogStatus ihomog_build(const struct IhomogInstance *inst, char **out_json);

/**
 * Removes torsion. Writes the note to `out_note` and, on success, a new handle to
 * `out_reduced` (left null when the torsion is not invariant).
 *
 * # Safety
 * `inst` must come from this library; both out pointers must be writable.
 */
enum IhomogStatus ihomog_reduce_torsion(const struct IhomogInstance *inst,
                                        char **out_note,
                                        struct IhomogInstance **out_reduced);

/**
 * Numerical realization. Non-positive `fd_step` or `tolerance` selects the default.
 *
 * # Safety
 * `inst` must come from this library and `out_json` must be writable.
 */
enum IhomogStatus ihomog_realize(const struct IhomogInstance *inst,
                                 double fd_step,
                                 double tolerance,
                                 uint64_t seed,
                                 char **out_json);

/**
 * # Safety
 * `s` must be a string returned by this library (or null).
 */
void ihomog_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until the next call.
 */
const char *ihomog_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IHOMOG_H */
