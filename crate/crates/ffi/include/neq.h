#ifndef NEQ_H
#define NEQ_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

// Result codes shared by all functions.
typedef enum NeqStatus {
  NEQ_STATUS_OK = 0,
  NEQ_STATUS_NULL_POINTER = 1,
  NEQ_STATUS_INVALID_INPUT = 2,
  NEQ_STATUS_INFEASIBLE = 3,
  NEQ_STATUS_NUMERICAL_FAILURE = 4,
  NEQ_STATUS_OUT_OF_RANGE = 5,
  NEQ_STATUS_PANIC = 6,
} NeqStatus;

// A channel given by its Choi operator.
typedef struct NeqChannel NeqChannel;

// A task: performance operators, thermal context and input projector.
typedef struct NeqTask NeqTask;

// Accuracy range and reverse entropy of a task.
typedef struct NeqExtremes {
  double f_min;
  double f_max;
  double kappa;
  double c_min;
} NeqExtremes;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *neq_last_error(void);

// Library version as a static NUL-terminated string.
const char *neq_version(void);

// Builds a task from a `builtin:` URI. `energies` may be null for
// degenerate levels; otherwise it holds `n_energies` single-system levels.
//
// # Safety
// `uri` must be a NUL-terminated string, `energies` must point to
// `n_energies` doubles when non-null, and `out` must be writable.
enum NeqStatus neq_task_from_uri(const char *uri,
                                 double beta,
                                 const double *energies,
                                 size_t n_energies,
                                 struct NeqTask **out);

// Builds a task from its JSON description.
//
// # Safety
// `json` must be a NUL-terminated string and `out` must be writable.
enum NeqStatus neq_task_from_json(const char *json, struct NeqTask **out);

// Releases a task. Null is ignored.
//
// # Safety
// `task` must come from this library and not be used afterwards.
void neq_task_free(struct NeqTask *task);

// Input and output dimensions of a task.
//
// # Safety
// `task` must be a live handle; `d_a` and `d_b` must be writable.
enum NeqStatus neq_task_dims(const struct NeqTask *task, size_t *d_a, size_t *d_b);

// Reverse entropy of the task in bits.
//
// # Safety
// `task` must be a live handle and `kappa` writable.
enum NeqStatus neq_reverse_entropy(const struct NeqTask *task, double *kappa);

// `F_min`, `F_max`, `κ` and `c_min` of the task.
//
// # Safety
// `task` must be a live handle and `out` writable.
enum NeqStatus neq_f_extremes(const struct NeqTask *task, struct NeqExtremes *out);

// Minimum cost in bits of reaching accuracy `fidelity`. When `witness` is
// non-null it receives a new handle to an optimal channel (or null when none
// was produced).
//
// # Safety
// `task` must be a live handle, `cost_bits` writable, `witness` null or writable.
enum NeqStatus neq_cost_of_accuracy(const struct NeqTask *task,
                                    double fidelity,
                                    double *cost_bits,
                                    struct NeqChannel **witness);

// Maximum accuracy with at most `cost_bits` clean qubits; pass `+INFINITY`
// for no budget.
//
// # Safety
// `task` must be a live handle and `fidelity` writable.
enum NeqStatus neq_accuracy_of_cost(const struct NeqTask *task, double cost_bits, double *fidelity);

// Builds a channel from a row-major Choi operator on `A ⊗ B` given as real
// and imaginary parts, each `(d_a d_b)^2` doubles. `im` may be null for a
// real operator. The operator must be positive and trace preserving.
//
// # Safety
// `re` (and `im` when non-null) must point to `(d_a d_b)^2` doubles; `out` must be writable.
enum NeqStatus neq_channel_from_choi(const double *re,
                                     const double *im,
                                     size_t d_a,
                                     size_t d_b,
                                     struct NeqChannel **out);

// Releases a channel. Null is ignored.
//
// # Safety
// `channel` must come from this library and not be used afterwards.
void neq_channel_free(struct NeqChannel *channel);

// Copies the Choi operator into caller buffers of `len` doubles each
// (`len` must be at least `(d_a d_b)^2`). `im` may be null.
//
// # Safety
// `channel` must be a live handle; `d_a`, `d_b` writable; `re`/`im` null or `len` doubles.
enum NeqStatus neq_channel_choi(const struct NeqChannel *channel,
                                size_t *d_a,
                                size_t *d_b,
                                double *re,
                                double *im,
                                size_t len);

// Cost in bits of implementing `channel` on the task's inputs, using the
// task's thermal context and input projector.
//
// # Safety
// `channel` and `task` must be live handles and `cost_bits` writable.
enum NeqStatus neq_channel_cost(const struct NeqChannel *channel,
                                const struct NeqTask *task,
                                double *cost_bits);

// Worst-case accuracy of `channel` on the task.
//
// # Safety
// `channel` and `task` must be live handles and `fidelity` writable.
enum NeqStatus neq_channel_accuracy(const struct NeqChannel *channel,
                                    const struct NeqTask *task,
                                    double *fidelity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NEQ_H */
