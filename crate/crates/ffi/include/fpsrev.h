#ifndef FPSREV_H
#define FPSREV_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Values 1 to 5 match the command-line exit codes.
 */
typedef enum FpsStatus {
  FPS_STATUS_OK = 0,
  FPS_STATUS_INVALID_ARGUMENT = 1,
  FPS_STATUS_FORMAT_ERROR = 2,
  FPS_STATUS_PRECONDITION_VIOLATED = 3,
  FPS_STATUS_VERIFICATION_FAILED = 4,
  FPS_STATUS_RESOURCE_CAP = 5,
  FPS_STATUS_NULL_POINTER = 6,
  FPS_STATUS_PANIC = 7,
} FpsStatus;

typedef enum FpsMethod {
  FPS_METHOD_NEUMANN = 0,
  FPS_METHOD_RECURRENCE = 1,
  FPS_METHOD_FIXPOINT = 2,
} FpsMethod;

/**
 * Opaque truncated series map.
 */
typedef struct FpsSeries FpsSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next library call on this thread.
 */
const char *fps_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fps_string_free(char *s);

/**
 * Releases a series handle. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fps_series_free(struct FpsSeries *s);

/**
 * Parses the text series format.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum FpsStatus fps_series_parse(const char *text, struct FpsSeries **out);

/**
 * The identity map in `nvars` variables truncated at `degree`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FpsStatus fps_series_identity(uintptr_t nvars, uint32_t degree, struct FpsSeries **out);

/**
 * Emits canonical text, or JSON when `json` is nonzero.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum FpsStatus fps_series_emit(const struct FpsSeries *s, int32_t json, char **out);

/**
 * Number of variables, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
uintptr_t fps_series_nvars(const struct FpsSeries *s);

/**
 * Truncation degree, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
uint32_t fps_series_degree_cap(const struct FpsSeries *s);

/**
 * Coefficient of `x^exponent` in 1-based component `comp`, as `"p/q"` or an
 * integer string.
 *
 * # Safety
 * `s` must be a live handle, `exponent` must point to `len` values, `out`
 * must be writable.
 */
enum FpsStatus fps_series_coeff(const struct FpsSeries *s,
                                uintptr_t comp,
                                const uint32_t *exponent,
                                uintptr_t len,
                                char **out);

/**
 * Nonzero when both handles hold identical maps in the same context.
 *
 * # Safety
 * Both must be null or live handles.
 */
int32_t fps_series_equal(const struct FpsSeries *a, const struct FpsSeries *b);

/**
 * `outer ∘ inner`.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum FpsStatus fps_compose(const struct FpsSeries *outer,
                           const struct FpsSeries *inner,
                           struct FpsSeries **out);

/**
 * `times`-fold self-composition.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum FpsStatus fps_iterate(const struct FpsSeries *s, uintptr_t times, struct FpsSeries **out);

/**
 * Formal inverse of a map with identity linear part.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum FpsStatus fps_invert(const struct FpsSeries *s, enum FpsMethod method, struct FpsSeries **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FPSREV_H */
