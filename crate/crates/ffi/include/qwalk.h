#ifndef QWALK_H
#define QWALK_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum QwStatus {
  QW_STATUS_OK = 0,
  QW_STATUS_NULL_POINTER = 1,
  QW_STATUS_INVALID_ARGUMENT = 2,
  QW_STATUS_CAPACITY = 3,
  QW_STATUS_VALIDATION = 4,
  QW_STATUS_UNSUPPORTED = 5,
  QW_STATUS_PARSE = 6,
  QW_STATUS_NUMERICAL = 7,
  QW_STATUS_IO = 8,
  QW_STATUS_BUFFER_TOO_SMALL = 9,
  QW_STATUS_PANIC = 10,
} QwStatus;

// Opaque circuit handle.
typedef struct QwCircuit QwCircuit;

// Opaque walk-search result handle.
typedef struct QwSearchResult QwSearchResult;

// Opaque statevector handle.
typedef struct QwStateVector QwStateVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the
// next `qw_*` call on the same thread.
const char *qw_last_error(void);

// Library version as a static string.
const char *qw_version(void);

// # Safety
// `s` is NULL or a string returned by this library, not yet freed.
void qw_string_free(char *s);

// `|0…0⟩` on `n_qubits` qubits.
//
// # Safety
// `out` is a valid pointer to writable storage for one handle.
enum QwStatus qw_state_new(uintptr_t n_qubits, struct QwStateVector **out);

// # Safety
// `state` is NULL or a live handle from this library.
void qw_state_free(struct QwStateVector *state);

// Number of qubits, or 0 for NULL.
//
// # Safety
// `state` is NULL or a live handle.
uintptr_t qw_state_num_qubits(const struct QwStateVector *state);

// Runs `circuit` on `state` in place.
//
// # Safety
// Both pointers are live handles; `state` is not aliased.
enum QwStatus qw_state_apply(struct QwStateVector *state, const struct QwCircuit *circuit);

// Writes the `2^n` basis-state probabilities into `buf`. `out_len`, when not
// NULL, receives the required length; pass `buf = NULL` to query it.
//
// # Safety
// `buf` is NULL or points to `len` writable doubles; `out_len` is NULL or writable.
enum QwStatus qw_state_probabilities(const struct QwStateVector *state,
                                     double *buf,
                                     uintptr_t len,
                                     uintptr_t *out_len);

// Parses the circuit text format.
//
// # Safety
// `text` is a NUL-terminated string; `out` is writable.
enum QwStatus qw_circuit_parse(const char *text, struct QwCircuit **out);

// One coined-walk step (Grover coin then shift) on `family:size`.
//
// # Safety
// `family` is a NUL-terminated string; `out` is writable.
enum QwStatus qw_walk_step(const char *family, uintptr_t size, struct QwCircuit **out);

// # Safety
// `circuit` is NULL or a live handle.
void qw_circuit_free(struct QwCircuit *circuit);

// # Safety
// `circuit` is NULL or a live handle.
uintptr_t qw_circuit_num_qubits(const struct QwCircuit *circuit);

// Serializes to the circuit text format. Free the result with [`qw_string_free`].
//
// # Safety
// `circuit` is a live handle; `out` is writable.
enum QwStatus qw_circuit_to_text(const struct QwCircuit *circuit, char **out);

// Walk search on `family:size` with comma-separated MSB-first `marked`
// labels. `theta_qubits = 0` selects the default width; `shots = 0` skips
// sampling beyond a single shot.
//
// # Safety
// `family` and `marked` are NUL-terminated strings; `out` is writable.
enum QwStatus qw_search_run(const char *family,
                            uintptr_t size,
                            const char *marked,
                            uintptr_t theta_qubits,
                            uintptr_t iterations,
                            uint64_t shots,
                            uint64_t seed,
                            struct QwSearchResult **out);

// # Safety
// `result` is NULL or a live handle.
void qw_search_free(struct QwSearchResult *result);

// Marked probability per iteration (`iterations + 1` values, index 0 is the
// initial state). Same buffer protocol as [`qw_state_probabilities`].
//
// # Safety
// `result` is a live handle; `buf` is NULL or holds `len` doubles; `out_len` is NULL or writable.
enum QwStatus qw_search_trace(const struct QwSearchResult *result,
                              double *buf,
                              uintptr_t len,
                              uintptr_t *out_len);

// Argmax iteration of the trace and its probability.
//
// # Safety
// `result` is a live handle; both outputs are writable.
enum QwStatus qw_search_hitting_time(const struct QwSearchResult *result,
                                     uintptr_t *iteration,
                                     double *probability);

// Full result as JSON. Free the result with [`qw_string_free`].
//
// # Safety
// `result` is a live handle; `out` is writable.
enum QwStatus qw_search_to_json(const struct QwSearchResult *result, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QWALK_H */
