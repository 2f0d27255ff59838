#ifndef CYCLECUT_H
#define CYCLECUT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum CyclecutStatus {
  CYCLECUT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CYCLECUT_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  CYCLECUT_STATUS_INVALID_UTF8 = 2,
  /**
   * The input was rejected (parse error, invalid LP point, bad option).
   */
  CYCLECUT_STATUS_INVALID_INPUT = 3,
  /**
   * The input is valid but a checked property fails, e.g. the hierarchy
   * contains a degree cut.
   */
  CYCLECUT_STATUS_VIOLATION = 4,
  /**
   * A caller-provided buffer has the wrong length.
   */
  CYCLECUT_STATUS_BUFFER_SIZE = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  CYCLECUT_STATUS_PANIC = 6,
} CyclecutStatus;

/**
 * Opaque validated LP point.
 */
typedef struct CyclecutInstance CyclecutInstance;

/**
 * Opaque sampling pipeline: hierarchy, frames and per-cut distributions
 * of one instance.
 */
typedef struct CyclecutPipeline CyclecutPipeline;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *cyclecut_last_error(void);

/**
 * Schema version of JSON reports, as a static string.
 */
const char *cyclecut_schema_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string obtained from this library, not yet freed.
 */
void cyclecut_string_free(char *s);

/**
 * Parses and validates an instance document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum CyclecutStatus cyclecut_instance_from_json(const char *json, struct CyclecutInstance **out);

/**
 * The integrality-gap family with `k` internal vertices per path and unit
 * costs.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CyclecutStatus cyclecut_instance_figure1(size_t k, struct CyclecutInstance **out);

/**
 * Releases an instance. Null is ignored.
 *
 * # Safety
 * `inst` must be null or a live handle from this library.
 */
void cyclecut_instance_free(struct CyclecutInstance *inst);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t cyclecut_instance_vertex_count(const struct CyclecutInstance *inst);

/**
 * LP value `sum c_e x_e` as `"p/q"`.
 *
 * # Safety
 * `inst` must be a live handle and `out` valid for writes.
 */
enum CyclecutStatus cyclecut_instance_lp_value(const struct CyclecutInstance *inst, char **out);

/**
 * Serializes an instance back to its JSON document.
 *
 * # Safety
 * `inst` must be a live handle and `out` valid for writes.
 */
enum CyclecutStatus cyclecut_instance_to_json(const struct CyclecutInstance *inst, char **out);

/**
 * Builds the sampling pipeline. `root` below 0 selects the instance's own
 * root; `p_root` may be null for the default `1/3,1/3,1/3,0`.
 *
 * # Safety
 * `inst` must be a live handle, `p_root` null or a NUL-terminated string,
 * and `out` valid for writes.
 */
enum CyclecutStatus cyclecut_pipeline_new(const struct CyclecutInstance *inst,
                                          int64_t root,
                                          const char *p_root,
                                          bool reflect,
                                          struct CyclecutPipeline **out);

/**
 * Releases a pipeline. Null is ignored.
 *
 * # Safety
 * `p` must be null or a live handle from this library.
 */
void cyclecut_pipeline_free(struct CyclecutPipeline *p);

/**
 * Number of support multigraph edges (length of multiplicity buffers), or
 * 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t cyclecut_pipeline_edge_count(const struct CyclecutPipeline *p);

/**
 * Endpoints of multigraph edge `edge`.
 *
 * # Safety
 * `p` must be a live handle; `u` and `v` valid for writes.
 */
enum CyclecutStatus cyclecut_pipeline_edge(const struct CyclecutPipeline *p,
                                           size_t edge,
                                           size_t *u,
                                           size_t *v);

/**
 * Exact expected tour cost as `"p/q"`.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for writes.
 */
enum CyclecutStatus cyclecut_pipeline_expected_cost(const struct CyclecutPipeline *p, char **out);

/**
 * Samples one tour with `seed`, writing each edge's multiplicity (0, 1 or
 * 2) into `multiplicities`, which must hold exactly
 * [`cyclecut_pipeline_edge_count`] entries.
 *
 * # Safety
 * `p` must be a live handle and `multiplicities` valid for `len` writes.
 */
enum CyclecutStatus cyclecut_pipeline_sample(const struct CyclecutPipeline *p,
                                             uint64_t seed,
                                             uint8_t *multiplicities,
                                             size_t len);

/**
 * Monte Carlo usage report over `samples` draws, as JSON.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for writes.
 */
enum CyclecutStatus cyclecut_pipeline_usage_report(const struct CyclecutPipeline *p,
                                                   size_t samples,
                                                   uint64_t seed,
                                                   char **out);

/**
 * Tests whether a distribution such as `"1/3,1/3,1/3,0"` lies in the
 * feasible region.
 *
 * # Safety
 * `dist` must be a NUL-terminated string and `out` valid for writes.
 */
enum CyclecutStatus cyclecut_region_contains(const char *dist, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCLECUT_H */
