#ifndef QTEDIT_H
#define QTEDIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum QteStatus {
  QTE_STATUS_OK = 0,
  QTE_STATUS_NULL_POINTER = 1,
  QTE_STATUS_INVALID_ARGUMENT = 2,
  QTE_STATUS_PARSE = 3,
  QTE_STATUS_IO = 4,
  QTE_STATUS_INFEASIBLE = 5,
  QTE_STATUS_PANIC = 6,
} QteStatus;

/**
 * Kind of forbidden subgraph in a recognition result.
 */
typedef enum QteForbidden {
  QTE_FORBIDDEN_NONE = 0,
  QTE_FORBIDDEN_P4 = 1,
  QTE_FORBIDDEN_C4 = 2,
} QteForbidden;

/**
 * Starting skeleton for [`qte_qtm`].
 */
typedef enum QteInit {
  QTE_INIT_HEURISTIC = 0,
  QTE_INIT_TRIVIAL = 1,
} QteInit;

/**
 * Opaque rooted skeleton forest.
 */
typedef struct QteForest QteForest;

/**
 * Opaque undirected graph.
 */
typedef struct QteGraph QteGraph;

/**
 * Outcome of [`qte_recognize`]. When `forbidden` is not `NONE`, `nodes`
 * holds the certificate in path (or cycle) order.
 */
typedef struct QteRecognition {
  bool is_quasi_threshold;
  enum QteForbidden forbidden;
  size_t nodes[4];
} QteRecognition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *qte_last_error_message(void);

/**
 * Builds a graph on `n` nodes from `m` edges given as parallel endpoint
 * arrays. Self-loops and duplicates are ignored.
 *
 * # Safety
 * `us` and `vs` must point to `m` readable elements each (they may be null
 * when `m == 0`); `out` must be valid for a write.
 */
enum QteStatus qte_graph_from_edges(size_t n,
                                    const size_t *us,
                                    const size_t *vs,
                                    size_t m,
                                    struct QteGraph **out);

/**
 * Loads a whitespace-separated edge list file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for a write.
 */
enum QteStatus qte_graph_load(const char *path, struct QteGraph **out);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `g` must be null or a handle from this library that was not freed yet.
 */
void qte_graph_free(struct QteGraph *g);

/**
 * Number of nodes, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t qte_graph_node_count(const struct QteGraph *g);

/**
 * Number of edges, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t qte_graph_edge_count(const struct QteGraph *g);

/**
 * Certifying recognition. When the graph is quasi-threshold and `forest` is
 * not null, a new skeleton handle is stored there; otherwise `*forest` is
 * set to null (if given).
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be valid for a write; `forest`
 * must be null or valid for a write.
 */
enum QteStatus qte_recognize(const struct QteGraph *g,
                             struct QteRecognition *out,
                             struct QteForest **forest);

/**
 * Triangle-guided initial skeleton.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be valid for a write.
 */
enum QteStatus qte_initial_skeleton(const struct QteGraph *g, struct QteForest **out);

/**
 * Runs the Quasi-Threshold Mover. `max_rounds == 0` runs until a round
 * changes nothing. The final edit count goes to `edits`; the final skeleton
 * goes to `forest` unless it is null.
 *
 * # Safety
 * `g` must be a live graph handle; `edits` must be valid for a write;
 * `forest` must be null or valid for a write.
 */
enum QteStatus qte_qtm(const struct QteGraph *g,
                       enum QteInit init,
                       size_t max_rounds,
                       uint64_t seed,
                       size_t *edits,
                       struct QteForest **forest);

/**
 * Number of edits turning the graph into the closure of the forest.
 *
 * # Safety
 * `g` and `f` must be live handles; `out` must be valid for a write.
 */
enum QteStatus qte_count_edits(const struct QteGraph *g, const struct QteForest *f, size_t *out);

/**
 * Disjoint-witness lower bound on the edit distance.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be valid for a write.
 */
enum QteStatus qte_lower_bound(const struct QteGraph *g, uint64_t seed, size_t *out);

/**
 * Number of nodes, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live forest handle.
 */
size_t qte_forest_node_count(const struct QteForest *f);

/**
 * Parent of `node`, or -1 for a root.
 *
 * # Safety
 * `f` must be a live forest handle; `out` must be valid for a write.
 */
enum QteStatus qte_forest_parent(const struct QteForest *f, size_t node, ptrdiff_t *out);

/**
 * Releases a forest. Null is ignored.
 *
 * # Safety
 * `f` must be null or a handle from this library that was not freed yet.
 */
void qte_forest_free(struct QteForest *f);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QTEDIT_H */
