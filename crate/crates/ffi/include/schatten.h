#ifndef SCHATTEN_H
#define SCHATTEN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every call.
 */
typedef enum SchattenStatus {
  SCHATTEN_STATUS_OK = 0,
  SCHATTEN_STATUS_NULL_POINTER = 1,
  SCHATTEN_STATUS_INVALID_INPUT = 2,
  SCHATTEN_STATUS_IO = 3,
  SCHATTEN_STATUS_PARSE = 4,
  SCHATTEN_STATUS_NOT_HERMITIAN = 5,
  SCHATTEN_STATUS_OUT_OF_RANGE = 6,
  SCHATTEN_STATUS_WORK_BUDGET_EXCEEDED = 7,
  SCHATTEN_STATUS_NUMERICAL = 8,
  SCHATTEN_STATUS_PANIC = 9,
} SchattenStatus;

/*
 Readout of the one-clean-qubit estimator.
 */
typedef enum SchattenReadout {
  SCHATTEN_READOUT_EXACT_SUBMATRIX = 0,
  SCHATTEN_READOUT_SAMPLED = 1,
} SchattenReadout;

typedef enum SchattenWalkMode {
  SCHATTEN_WALK_MODE_LITERAL = 0,
  SCHATTEN_WALK_MODE_CORRECTED = 1,
  SCHATTEN_WALK_MODE_EXHAUSTIVE = 2,
} SchattenWalkMode;

/*
 Log-local Hamiltonian on at most a few qubits.
 */
typedef struct SchattenHamiltonian SchattenHamiltonian;

/*
 Sparse Hermitian matrix, typically a graph adjacency matrix.
 */
typedef struct SchattenSparse SchattenSparse;

/*
 An estimate and the additive error it claims.
 */
typedef struct SchattenEstimate {
  double value;
  double claimed_bound;
  double wallclock_ms;
} SchattenEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL after a success.
 The pointer stays valid until the next call on the same thread.
 */
const char *schatten_last_error(void);

/*
 Loads a Hamiltonian from its JSON description.

 # Safety
 `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum SchattenStatus schatten_hamiltonian_load(const char *path, struct SchattenHamiltonian **out);

/*
 # Safety
 `h` must come from [`schatten_hamiltonian_load`] and not be freed twice.
 */
void schatten_hamiltonian_free(struct SchattenHamiltonian *h);

/*
 # Safety
 `h` must be a live handle.
 */
size_t schatten_hamiltonian_qubits(const struct SchattenHamiltonian *h);

/*
 Loads a sparse matrix in the text edge-list format.

 # Safety
 `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum SchattenStatus schatten_sparse_load(const char *path, struct SchattenSparse **out);

/*
 # Safety
 `a` must come from [`schatten_sparse_load`] and not be freed twice.
 */
void schatten_sparse_free(struct SchattenSparse *a);

/*
 # Safety
 `a` must be a live handle.
 */
size_t schatten_sparse_dim(const struct SchattenSparse *a);

/*
 One-clean-qubit estimate of `Tr|A|^p / 2^n` (or `Tr A^p / 2^n` when
 `signed` is nonzero).

 # Safety
 `h` must be a live handle and `out` writable.
 */
enum SchattenStatus schatten_dqc1_schatten(const struct SchattenHamiltonian *h,
                                           uint32_t p,
                                           double eps,
                                           bool signed_,
                                           enum SchattenReadout readout,
                                           double fail_prob,
                                           uint64_t seed,
                                           struct SchattenEstimate *out);

/*
 Random-walk estimate of `Tr(A^p) / N`.

 # Safety
 `a` must be a live handle and `out` writable.
 */
enum SchattenStatus schatten_walk_trace(const struct SchattenSparse *a,
                                        uint32_t p,
                                        double eps,
                                        double eps_prime,
                                        double fail_prob,
                                        enum SchattenWalkMode mode,
                                        uint64_t seed,
                                        struct SchattenEstimate *out);

/*
 Exact `Tr|A|^p / 2^n` by diagonalisation.

 # Safety
 `h` must be a live handle and `out` writable.
 */
enum SchattenStatus schatten_hamiltonian_abs_power_mean(const struct SchattenHamiltonian *h,
                                                        double p,
                                                        double *out);

/*
 Exact `Tr|A|^p / N` by diagonalisation; `p = 1` gives the energy per vertex.

 # Safety
 `a` must be a live handle and `out` writable.
 */
enum SchattenStatus schatten_sparse_abs_power_mean(const struct SchattenSparse *a,
                                                   double p,
                                                   double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHATTEN_H */
