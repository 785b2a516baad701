/* C interface to the wlsim library. Generated by cbindgen; do not edit. */

#ifndef WLSIM_H
#define WLSIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; 0 is success and `Distinguished` is an affirmative
// answer, not an error.
typedef enum WlsimStatus {
  WLSIM_STATUS_OK = 0,
  WLSIM_STATUS_DISTINGUISHED = 1,
  WLSIM_STATUS_INVALID_INPUT = 2,
  WLSIM_STATUS_RUNTIME_ERROR = 3,
  WLSIM_STATUS_NOT_FOUND = 4,
} WlsimStatus;

// An immutable graph behind an opaque pointer.
typedef struct WlsimGraph WlsimGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null after a
// success. The pointer is valid until the next wlsim call on the thread.
const char *wlsim_last_error(void);

// The library version as a static NUL-terminated string.
const char *wlsim_version(void);

// Loads a graph file (`n=<count>` header, one `u v` edge per line).
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum WlsimStatus wlsim_graph_load(const char *path, struct WlsimGraph **out);

// Samples G(nodes, prob) with the documented generator.
//
// # Safety
// `out` must be a valid pointer.
enum WlsimStatus wlsim_graph_erdos_renyi(uint64_t nodes,
                                         double prob,
                                         uint64_t seed,
                                         struct WlsimGraph **out);

// Samples a preferential-attachment graph (`attach` edges per node).
//
// # Safety
// `out` must be a valid pointer.
enum WlsimStatus wlsim_graph_barabasi_albert(uint64_t nodes,
                                             uint64_t attach,
                                             uint64_t seed,
                                             struct WlsimGraph **out);

// Frees a graph handle; a null pointer is a no-op.
//
// # Safety
// `g` must have come from a wlsim constructor and not been freed yet.
void wlsim_graph_free(struct WlsimGraph *g);

// Node count, or 0 for a null handle.
//
// # Safety
// `g` must be a live handle or null.
uint64_t wlsim_graph_nodes(const struct WlsimGraph *g);

// Edge count, or 0 for a null handle.
//
// # Safety
// `g` must be a live handle or null.
uint64_t wlsim_graph_edges(const struct WlsimGraph *g);

// Refines to convergence; writes the stable round and class count.
//
// # Safety
// `g` must be a live handle; out pointers may be null to skip a field.
enum WlsimStatus wlsim_wl_run(const struct WlsimGraph *g,
                              uint64_t *stable_round,
                              uint64_t *classes);

// Compares two graphs under refinement. Returns `Distinguished` (writing
// the round) or `Ok` for indistinguishable.
//
// # Safety
// `a` and `b` must be live handles; `round` may be null.
enum WlsimStatus wlsim_wl_distinguish(const struct WlsimGraph *a,
                                      const struct WlsimGraph *b,
                                      uint64_t *round);

// Compares two graphs under the k-order test.
//
// # Safety
// `a` and `b` must be live handles; `round` may be null.
enum WlsimStatus wlsim_nwl_distinguish(const struct WlsimGraph *a,
                                       const struct WlsimGraph *b,
                                       uint64_t k,
                                       uint64_t *round);

// Whether the network at `bits` of precision tracks refinement on `g`
// (sigmoid activation, simplified weights, constant-one features).
//
// # Safety
// `g` must be a live handle and `perfect` a valid pointer.
enum WlsimStatus wlsim_perfect_simulation(const struct WlsimGraph *g,
                                          double gamma,
                                          uint32_t bits,
                                          bool *perfect);

// Minimum sufficient precision on the search lattice; `NotFound` when
// nothing up to `p_max` simulates perfectly.
//
// # Safety
// `g` must be a live handle and `bits` a valid pointer.
enum WlsimStatus wlsim_min_precision_bits(const struct WlsimGraph *g,
                                          double gamma,
                                          uint32_t p_max,
                                          uint32_t *bits);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WLSIM_H */
