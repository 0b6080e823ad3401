#ifndef FATGRAPH_H
#define FATGRAPH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call.
typedef enum FgStatus {
  FG_STATUS_OK = 0,
  // a pointer argument was null
  FG_STATUS_NULL_ARGUMENT = 1,
  // a string argument was not UTF-8
  FG_STATUS_UTF8 = 2,
  // malformed JSON or a document that does not describe a valid object
  FG_STATUS_INPUT = 3,
  // the data is well formed but the computation is not defined for it
  FG_STATUS_MATH = 4,
  // an identity suite ran and failed
  FG_STATUS_IDENTITY_FAILED = 5,
  // a bug inside the library
  FG_STATUS_PANIC = 6,
} FgStatus;

// An algebra together with its cyclic structure.
typedef struct FgAlgebra FgAlgebra;

// A ribbon graph, possibly with legs.
typedef struct FgGraph FgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a success.
// The pointer stays valid until the next call on the same thread.
const char *fg_last_error(void);

// Library version as a static string.
const char *fg_version(void);

// # Safety
// `s` must be null or a string returned by this library that has not been freed.
void fg_string_free(char *s);

// Parses an algebra document. The algebra is not validated; see
// [`fg_algebra_validate`].
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum FgStatus fg_algebra_from_json(const char *json, struct FgAlgebra **out);

// Loads one of the shipped algebras: `trivial`, `even_sphere`, `odd_line`
// or `twisted_2_1`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a writable pointer.
enum FgStatus fg_algebra_fixture(const char *name, struct FgAlgebra **out);

// # Safety
// `a` must be null or a handle from this library that has not been freed.
void fg_algebra_free(struct FgAlgebra *a);

// Checks the form and the cyclic A-infinity relations. Writes 1 to `valid`
// when every check passes and, if `report` is not null, the full report as JSON.
//
// # Safety
// `a` must be a live handle, `valid` a writable pointer, `report` null or writable.
enum FgStatus fg_algebra_validate(const struct FgAlgebra *a, int32_t *valid, char **report);

// Parses a graph document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum FgStatus fg_graph_from_json(const char *json, struct FgGraph **out);

// # Safety
// `g` must be null or a handle from this library that has not been freed.
void fg_graph_free(struct FgGraph *g);

// Canonical form of a graph: representative, orientation sign and
// automorphism count.
//
// # Safety
// `g` must be a live handle and `out` a writable pointer.
enum FgStatus fg_graph_canonical_json(const struct FgGraph *g, char **out);

// Partition function value on a closed graph, written as a decimal scalar
// such as `-1/6` or `1/2+3i`.
//
// # Safety
// `a` and `g` must be live handles and `out` a writable pointer.
enum FgStatus fg_partition_value(const struct FgAlgebra *a, const struct FgGraph *g, char **out);

// Partition function summed over all graphs with at most `max_vertices`
// vertices and `max_edges` edges, as a JSON list of graph terms.
//
// # Safety
// `a` must be a live handle and `out` a writable pointer.
enum FgStatus fg_partition_function_json(const struct FgAlgebra *a,
                                         size_t max_vertices,
                                         size_t max_edges,
                                         bool connected,
                                         char **out);

// Correlator of a legged graph as a tensor document.
//
// # Safety
// `a` and `g` must be live handles and `out` a writable pointer.
enum FgStatus fg_correlation_json(const struct FgAlgebra *a, const struct FgGraph *g, char **out);

// Betti numbers of the graph complex up to `max_edges` edges, as JSON rows.
//
// # Safety
// `out` must be a writable pointer.
enum FgStatus fg_homology_json(size_t max_edges, bool connected, char **out);

// Runs a named identity suite. `max_edges` and `samples` of 0 select the
// suite defaults; a null `a` runs against the shipped algebras. Returns
// `FG_STATUS_IDENTITY_FAILED` when the suite finds a counterexample, in which
// case the report is still written.
//
// # Safety
// `suite` must be a NUL-terminated string, `a` null or a live handle,
// `report` null or writable.
enum FgStatus fg_verify(const char *suite,
                        const struct FgAlgebra *a,
                        size_t max_edges,
                        size_t samples,
                        uint64_t seed,
                        char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FATGRAPH_H */
