/* negdep — exact-arithmetic negative-dependence toolkit: C interface.
 *
 * This is the stable boundary of the shared library. All functions are
 * thread-compatible (no shared mutable state except a thread-local error
 * slot); a measure handle must not be used from two threads at once.
 *
 * Conventions:
 *   - Every fallible function returns an ndp_status; NDP_OK means success.
 *     On failure, ndp_last_error() / ndp_last_error_code() describe the
 *     problem for the calling thread until its next negdep call.
 *   - Strings returned through char** out-parameters are NUL-terminated,
 *     heap-allocated, and must be released with ndp_string_free().
 *   - All numeric quantities cross the boundary as decimal strings or JSON;
 *     rationals are strings "p/q" (or "p"), never floats.
 */

#ifndef NEGDEP_H
#define NEGDEP_H

#include <stdint.h>

/* The shared library is built with hidden visibility; only NDP_API symbols
 * are exported. */
#if defined(_WIN32)
#if defined(NDP_BUILD)
#define NDP_API __declspec(dllexport)
#else
#define NDP_API __declspec(dllimport)
#endif
#else
#define NDP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* -------------------------------------------------------------- status -- */

typedef enum ndp_status {
  NDP_OK = 0,
  NDP_ERR_PARSE = 1,          /* malformed spec, JSON, rational, or token   */
  NDP_ERR_DOMAIN = 2,         /* well-formed input outside the valid domain */
  NDP_ERR_CAP = 3,            /* a hard size cap would be exceeded          */
  NDP_ERR_IO = 4,             /* file could not be read                     */
  NDP_ERR_UNKNOWN_TARGET = 5, /* reproduce/search target not registered     */
  NDP_ERR_INTERNAL = 6        /* invariant violation inside the library     */
} ndp_status;

/* Stable lowercase token for a status value, e.g. "parse". */
NDP_API const char* ndp_status_name(ndp_status status);

/* Thread-local message / fine-grained code token for the most recent failed
 * call on this thread. Empty strings when the last call succeeded. The
 * returned pointers stay valid until the next negdep call on the thread. */
NDP_API const char* ndp_last_error(void);
NDP_API const char* ndp_last_error_code(void);

/* Library version as "major.minor.patch". Static storage; do not free. */
NDP_API const char* ndp_version(void);

/* Release a string obtained from any char** out-parameter. NULL is a no-op. */
NDP_API void ndp_string_free(char* s);

/* ------------------------------------------------------------- options -- */

typedef struct ndp_options {
  uint64_t seed;          /* RNG seed for sampling falsifiers and searches  */
  int64_t budget_samples; /* random-field falsification budget; <0 default  */
  int64_t budget_boxes;   /* subdivision box budget; <0 default             */
} ndp_options;

/* seed = 0, budget_samples = -1, budget_boxes = -1 (library defaults). */
NDP_API void ndp_options_init(ndp_options* options);

/* ------------------------------------------------------------- measure -- */

/* Opaque handle: a probability measure on {0,1}^n together with its source
 * description and any properties its construction guarantees. */
typedef struct ndp_measure ndp_measure;

/* Parse a measure from its JSON text form. `source` is an optional label
 * recorded in reports (e.g. a file path); NULL means "json". */
NDP_API ndp_status ndp_measure_from_json(const char* json_text, const char* source,
                                 ndp_measure** out);

/* Build a measure from a family spec "name:key=value,...". Supported names:
 * product, exchangeable, uniform, nu, urn, gadget, forests, trees, matroid.
 * A value "@path" loads JSON from that file. */
NDP_API ndp_status ndp_measure_from_family(const char* spec, ndp_measure** out);

/* Number of coordinates n, or -1 if `m` is NULL. */
NDP_API int ndp_measure_coords(const ndp_measure* m);

/* Serialize the measure to its JSON text form. */
NDP_API ndp_status ndp_measure_to_json(const ndp_measure* m, char** out_json);

NDP_API void ndp_measure_free(ndp_measure* m);

/* ------------------------------------------------------------ commands -- */

/* Run property checks on a measure. `props_csv` is a comma-separated list
 * of property tokens (case-insensitive), e.g. "ulc,ncplus,naplus" or
 * "lcm(5)". The report (JSON text) lands in *out_report. *out_exit receives
 * the batch exit code: 0 = every requested property decided, 4 = a requested
 * property stayed undecided after exhausting its budget. `options` may be
 * NULL for defaults. */
NDP_API ndp_status ndp_check(const ndp_measure* m, const char* props_csv,
                     const ndp_options* options, char** out_report,
                     int* out_exit);

/* Run a pinned-parameter scripted experiment with pinned expected verdicts.
 * `args_csv` is "key=value,..." of integer overrides (e.g. "k=4") or NULL.
 * *out_exit: 0 = all expectations met, 2 = a verdict mismatched. */
NDP_API ndp_status ndp_reproduce(const char* target, const char* args_csv,
                         char** out_report, int* out_exit);

/* Run a randomized falsification harness. Arguments as for ndp_reproduce;
 * `options` supplies seed and budgets. *out_exit is 0 unless the input is
 * invalid (searches report what they find; finding nothing is a result). */
NDP_API ndp_status ndp_search(const char* target, const char* args_csv,
                      const ndp_options* options, char** out_report,
                      int* out_exit);

/* Comma-separated registries, for help text. */
NDP_API ndp_status ndp_reproduce_targets(char** out_csv);
NDP_API ndp_status ndp_search_targets(char** out_csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NEGDEP_H */
