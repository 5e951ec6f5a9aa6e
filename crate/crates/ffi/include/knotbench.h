#ifndef KNOTBENCH_H
#define KNOTBENCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KbMethod {
  KB_METHOD_SCAN = 0,
  KB_METHOD_NAIVE = 1,
} KbMethod;

typedef enum KbRing {
  KB_RING_RATIONAL = 0,
  KB_RING_F2 = 1,
} KbRing;

/**
 * Result code of every call.
 */
typedef enum KbStatus {
  KB_STATUS_OK = 0,
  KB_STATUS_NULL_ARGUMENT = 1,
  KB_STATUS_INVALID_UTF8 = 2,
  KB_STATUS_PARSE = 3,
  KB_STATUS_INVALID_INPUT = 4,
  KB_STATUS_VERIFICATION = 5,
  KB_STATUS_RESOURCE_GUARD = 6,
  KB_STATUS_IO = 7,
  KB_STATUS_PANIC = 8,
} KbStatus;

/**
 * An oriented link diagram.
 */
typedef struct KbDiagram KbDiagram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or NULL. Owned by
 * the library; valid until the next failing call on this thread.
 */
const char *kb_last_error(void);

/**
 * Parse a knot file (JSON).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KbStatus kb_diagram_from_json(const char *json, struct KbDiagram **out);

/**
 * Diagram from `n_crossings` PD 4-tuples stored contiguously in `labels`.
 *
 * # Safety
 * `labels` must point to `4 * n_crossings` integers and `out` be valid.
 */
enum KbStatus kb_diagram_from_pd(const uint32_t *labels,
                                 size_t n_crossings,
                                 struct KbDiagram **out);

/**
 * Diagram of a bundled corpus entry.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KbStatus kb_corpus_diagram(const char *name, struct KbDiagram **out);

/**
 * # Safety
 * `d` must come from this library and not be used afterwards. NULL is ignored.
 */
void kb_diagram_free(struct KbDiagram *d);

/**
 * # Safety
 * `d` and `out` must be valid.
 */
enum KbStatus kb_diagram_crossings(const struct KbDiagram *d, size_t *out);

/**
 * # Safety
 * `d` and `out` must be valid.
 */
enum KbStatus kb_diagram_components(const struct KbDiagram *d, size_t *out);

/**
 * Khovanov homology as a Poincaré polynomial string such as
 * `q + q^3 + q^5t^2 + q^9t^3`.
 *
 * # Safety
 * `d` and `out` must be valid; free the string with `kb_string_free`.
 */
enum KbStatus kb_khovanov(const struct KbDiagram *d,
                          enum KbRing ring,
                          enum KbMethod method,
                          char **out);

/**
 * Unnormalized Jones polynomial in `q`.
 *
 * # Safety
 * `d` and `out` must be valid; free the string with `kb_string_free`.
 */
enum KbStatus kb_jones(const struct KbDiagram *d, char **out);

/**
 * Rasmussen s-invariant of a knot.
 *
 * # Safety
 * `d` and `out` must be valid.
 */
enum KbStatus kb_s_invariant(const struct KbDiagram *d, int64_t *out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. NULL is ignored.
 */
void kb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KNOTBENCH_H */
