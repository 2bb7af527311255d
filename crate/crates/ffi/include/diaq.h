#ifndef DIAQ_H
#define DIAQ_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every exported function.
typedef enum DiaqStatus {
  DIAQ_STATUS_OK = 0,
  DIAQ_STATUS_NULL_POINTER = 1,
  DIAQ_STATUS_INVALID_HANDLE = 2,
  DIAQ_STATUS_INVALID_ARGUMENT = 3,
  DIAQ_STATUS_SHAPE = 4,
  DIAQ_STATUS_PARSE = 5,
  DIAQ_STATUS_UNSUPPORTED = 6,
  DIAQ_STATUS_RESOURCE = 7,
  DIAQ_STATUS_NUMERIC = 8,
  DIAQ_STATUS_PANIC = 9,
} DiaqStatus;

// Opaque sparse matrix.
typedef struct DiaqMatrixHandle DiaqMatrixHandle;

// Opaque simulation result.
typedef struct DiaqRunHandle DiaqRunHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *diaq_version(void);

// Error message of the most recent call on this thread; empty if that
// call succeeded. Valid until the next call into this library on the same
// thread.
const char *diaq_last_error_message(void);

// Source position of the last parse or unsupported-feature error on this
// thread; both are 0 when the error has no position.
enum DiaqStatus diaq_last_error_location(size_t *line, size_t *col);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void diaq_string_free(char *s);

// Builds a matrix from `n * n` interleaved complex values, row-major.
// Entries with `|re| + |im| <= eps` are dropped; pass 0 for a lossless
// conversion.
//
// # Safety
// `data` must point to `2 * n * n` doubles.
enum DiaqStatus diaq_matrix_from_dense(size_t n,
                                       const double *data,
                                       double eps,
                                       struct DiaqMatrixHandle **out);

// Writes the matrix as `n * n` interleaved complex values, row-major.
//
// # Safety
// `out` must point to `out_len` writable doubles; `out_len` must equal
// `2 * n * n`.
enum DiaqStatus diaq_matrix_to_dense(const struct DiaqMatrixHandle *m, double *out, size_t out_len);

// Dimension `n` of the `n x n` matrix.
//
// # Safety
// `out` must be valid for a write.
enum DiaqStatus diaq_matrix_dim(const struct DiaqMatrixHandle *m, size_t *out);

// Number of stored diagonals.
//
// # Safety
// `out` must be valid for a write.
enum DiaqStatus diaq_matrix_diag_count(const struct DiaqMatrixHandle *m, size_t *out);

// Number of entries with `|re| + |im| > eps`.
//
// # Safety
// `out` must be valid for a write.
enum DiaqStatus diaq_matrix_nnz(const struct DiaqMatrixHandle *m, double eps, size_t *out);

// `out = a * b`.
//
// # Safety
// `out` must be valid for a write.
enum DiaqStatus diaq_matrix_matmul(const struct DiaqMatrixHandle *a,
                                   const struct DiaqMatrixHandle *b,
                                   struct DiaqMatrixHandle **out);

// `out = transpose(a)`.
//
// # Safety
// `out` must be valid for a write.
enum DiaqStatus diaq_matrix_transpose(const struct DiaqMatrixHandle *a,
                                      struct DiaqMatrixHandle **out);

// `y = a * x` for interleaved complex vectors of length `n`.
//
// # Safety
// `x` must point to `2 * n` readable doubles and `y` to `2 * n` writable
// ones.
enum DiaqStatus diaq_matrix_spmv(const struct DiaqMatrixHandle *a,
                                 const double *x,
                                 size_t n,
                                 double *y);

// JSON form `{"n": N, "diags": {"<d>": [[re, im], ...]}}`. Free the result
// with `diaq_string_free`.
//
// # Safety
// `out` must be valid for a write.
enum DiaqStatus diaq_matrix_to_json(const struct DiaqMatrixHandle *m, char **out);

// Frees a matrix. Null is ignored; a handle that is not live returns
// `DIAQ_STATUS_INVALID_HANDLE`.
//
// # Safety
// `m` must be null or a pointer returned by this library.
enum DiaqStatus diaq_matrix_free(struct DiaqMatrixHandle *m);

// Parses and simulates an OpenQASM 2.0 program.
//
// `backend` is `"dense"` or `"diaq"`. With `emit_state` non-zero the final
// state is kept and can be read with `diaq_run_state`. Parse errors report
// their position through `diaq_last_error_location`.
//
// # Safety
// `qasm` and `backend` must be NUL-terminated; `out` valid for a write.
enum DiaqStatus diaq_simulate(const char *qasm,
                              const char *backend,
                              uint64_t shots,
                              uint64_t seed,
                              bool fusion,
                              bool emit_state,
                              struct DiaqRunHandle **out);

// Number of qubits of the simulated circuit.
//
// # Safety
// `out` must be valid for a write.
enum DiaqStatus diaq_run_n_qubits(const struct DiaqRunHandle *r, size_t *out);

// Counts as a JSON object from bitstring (qubit 0 first) to count. Free the
// result with `diaq_string_free`.
//
// # Safety
// `out` must be valid for a write.
enum DiaqStatus diaq_run_counts_json(const struct DiaqRunHandle *r, char **out);

// Copies the final state as `2^n` interleaved complex values. Fails with
// `DIAQ_STATUS_INVALID_ARGUMENT` if the run did not keep its state.
//
// # Safety
// `out` must point to `out_len` writable doubles, `out_len == 2 * 2^n`.
enum DiaqStatus diaq_run_state(const struct DiaqRunHandle *r, double *out, size_t out_len);

// Frees a run result. Null is ignored.
//
// # Safety
// `r` must be null or a pointer returned by this library.
enum DiaqStatus diaq_run_free(struct DiaqRunHandle *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIAQ_H */
