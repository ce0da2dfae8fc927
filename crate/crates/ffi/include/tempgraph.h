#ifndef TEMPGRAPH_H
#define TEMPGRAPH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Weight table used for scoring.
 */
typedef enum TgMode {
  TG_MODE_STRICT = 0,
  TG_MODE_RELAXED = 1,
} TgMode;

/**
 * Result of a library call.
 */
typedef enum TgStatus {
  TG_STATUS_OK = 0,
  TG_STATUS_NULL_POINTER = 1,
  TG_STATUS_INVALID_UTF8 = 2,
  TG_STATUS_PARSE = 3,
  TG_STATUS_INCONSISTENT = 4,
  TG_STATUS_CONFIG = 5,
  TG_STATUS_IO = 6,
  TG_STATUS_UNKNOWN_METRIC = 7,
  TG_STATUS_PANIC = 8,
  TG_STATUS_OTHER = 9,
} TgStatus;

/**
 * Opaque interval graph.
 */
typedef struct TgGraph TgGraph;

/**
 * Opaque evaluation report.
 */
typedef struct TgReport TgReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a graph in the native text format.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TgStatus tg_graph_parse(const char *source, struct TgGraph **out);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `graph` must come from this library and not have been freed.
 */
void tg_graph_free(struct TgGraph *graph);

/**
 * Writes the saturated copy of `graph` to `out`.
 *
 * # Safety
 * Pointers must be valid; `graph` must be a live handle.
 */
enum TgStatus tg_graph_saturate(const struct TgGraph *graph, struct TgGraph **out);

/**
 * Whether saturation succeeds.
 *
 * # Safety
 * Pointers must be valid; `graph` must be a live handle.
 */
enum TgStatus tg_graph_is_consistent(const struct TgGraph *graph, bool *out);

/**
 * Number of entities, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t tg_graph_node_count(const struct TgGraph *graph);

/**
 * Number of stored (non-universal) edges, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t tg_graph_edge_count(const struct TgGraph *graph);

/**
 * Native text form of `graph`. Free the result with [`tg_string_free`].
 *
 * # Safety
 * Pointers must be valid; `graph` must be a live handle.
 */
enum TgStatus tg_graph_serialize(const struct TgGraph *graph, char **out);

/**
 * Random windowed interval graph.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TgStatus tg_generate(size_t events,
                          int64_t range,
                          int64_t indet,
                          uint64_t seed,
                          struct TgGraph **out);

/**
 * Scores `candidate` against `reference`.
 *
 * # Safety
 * Pointers must be valid; graph arguments must be live handles.
 */
enum TgStatus tg_evaluate(const struct TgGraph *reference,
                          const struct TgGraph *candidate,
                          enum TgMode mode,
                          struct TgReport **out);

/**
 * Reads one numeric field of a report by name, e.g. `"TR"` or `"splits"`.
 *
 * # Safety
 * Pointers must be valid; `report` must be a live handle.
 */
enum TgStatus tg_report_get(const struct TgReport *report, const char *metric, double *out);

/**
 * JSON form of a report. Free the result with [`tg_string_free`].
 *
 * # Safety
 * Pointers must be valid; `report` must be a live handle.
 */
enum TgStatus tg_report_to_json(const struct TgReport *report, char **out);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `report` must come from this library and not have been freed.
 */
void tg_report_free(struct TgReport *report);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void tg_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *tg_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TEMPGRAPH_H */
