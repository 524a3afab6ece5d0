#ifndef GRAFREPAIR_H
#define GRAFREPAIR_H

#include <stdint.h>
#include <stddef.h>

#define GR_OK 0

#define GR_ERR_NULL -1

#define GR_ERR_UTF8 -2

#define GR_ERR_PARSE -3

#define GR_ERR_INVALID -4

#define GR_ERR_LIMIT -5

#define GR_ERR_CYCLIC -6

#define GR_ERR_PANIC -7

/**
 * A constraint in alternating normal form.
 */
typedef struct GrConstraint GrConstraint;

/**
 * A typed graph together with its type graph.
 */
typedef struct GrGraph GrGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or null. Owned by the library.
 */
const char *gr_last_error(void);

/**
 * Library version as a static string.
 */
const char *gr_version(void);

/**
 * Parse a graph document. `type_graph_json` may be null when the document embeds one.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be a valid pointer.
 */
int32_t gr_graph_from_json(const char *json, const char *type_graph_json, struct GrGraph **out);

/**
 * Canonical JSON of a graph. Release the string with [`gr_string_free`].
 *
 * # Safety
 * `graph` must come from this library; `out` must be a valid pointer.
 */
int32_t gr_graph_to_json(const struct GrGraph *graph, char **out);

/**
 * Number of nodes and edges.
 *
 * # Safety
 * `graph` must come from this library; the out pointers must be valid.
 */
int32_t gr_graph_size(const struct GrGraph *graph, size_t *nodes, size_t *edges);

/**
 * # Safety
 * `graph` must be null or come from this library, and must not be used afterwards.
 */
void gr_graph_free(struct GrGraph *graph);

/**
 * Parse a constraint document. `type_graph_json` may be null when the document embeds one.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be a valid pointer.
 */
int32_t gr_constraint_from_json(const char *json,
                                const char *type_graph_json,
                                struct GrConstraint **out);

/**
 * Nesting level of a constraint.
 *
 * # Safety
 * `constraint` must come from this library; `out` must be a valid pointer.
 */
int32_t gr_constraint_nlvl(const struct GrConstraint *constraint, size_t *out);

/**
 * # Safety
 * `constraint` must be null or come from this library, and must not be used afterwards.
 */
void gr_constraint_free(struct GrConstraint *constraint);

/**
 * Writes 1 to `out` when the graph satisfies the constraint and 0 otherwise.
 *
 * # Safety
 * Handles must come from this library; `out` must be a valid pointer.
 */
int32_t gr_check(const struct GrGraph *graph, const struct GrConstraint *constraint, int32_t *out);

/**
 * Largest satisfied layer.
 *
 * # Safety
 * Handles must come from this library; `out` must be a valid pointer.
 */
int32_t gr_kmax(const struct GrGraph *graph, const struct GrConstraint *constraint, int32_t *out);

/**
 * Repair a graph for one constraint. `rules_json` is a rule-set document, or null to use the
 * constructed repairing set. The repaired graph is a new handle.
 *
 * # Safety
 * Handles must come from this library; `rules_json` must be null or NUL-terminated;
 * `out` must be a valid pointer.
 */
int32_t gr_repair(const struct GrGraph *graph,
                  const struct GrConstraint *constraint,
                  const char *rules_json,
                  uint64_t seed,
                  struct GrGraph **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, and must not be used afterwards.
 */
void gr_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GRAFREPAIR_H */
