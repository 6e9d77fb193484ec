/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef PITE_LAB_H
#define PITE_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum PiteStatus {
  PITE_STATUS_OK = 0,
  PITE_STATUS_NULL_POINTER = 1,
  PITE_STATUS_INVALID_ARGUMENT = 2,
  PITE_STATUS_RESOURCE_LIMIT = 3,
  PITE_STATUS_SINGULARITY = 4,
  PITE_STATUS_DOMAIN = 5,
  PITE_STATUS_NUMERIC = 6,
  PITE_STATUS_DEGENERATE_TARGET = 7,
  PITE_STATUS_UNDERFLOW = 8,
  PITE_STATUS_EMBEDDING = 9,
  PITE_STATUS_POSTSELECTION_IMPOSSIBLE = 10,
  PITE_STATUS_CONFIG = 11,
  PITE_STATUS_IO = 12,
  PITE_STATUS_INTERNAL = 13,
  PITE_STATUS_BUFFER_TOO_SMALL = 14,
  PITE_STATUS_PANIC = 15,
} PiteStatus;

typedef enum PiteScheduleKind {
  PITE_SCHEDULE_KIND_CONSTANT = 0,
  PITE_SCHEDULE_KIND_LINEAR = 1,
  PITE_SCHEDULE_KIND_EXPONENTIAL = 2,
} PiteScheduleKind;

/**
 * Outcome of one evolution run.
 */
typedef struct PiteRunResult PiteRunResult;

/**
 * Imaginary-time step sequence.
 */
typedef struct PiteSchedule PiteSchedule;

/**
 * Ascending eigenvalues.
 */
typedef struct PiteSpectrum PiteSpectrum;

/**
 * Scalar part of a run result.
 */
typedef struct PiteRunSummary {
  double ln_error_tilde;
  double error_tilde;
  double error;
  double error_direct;
  double total_success;
  double ln_total_success;
  double fidelity;
  double cumulative_tau;
} PiteRunSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL after a success.
 * The pointer stays valid until the next call into this library on the same
 * thread.
 */
const char *pite_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pite_version(void);

/**
 * Spectrum from `len` nondecreasing eigenvalues.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be writable.
 */
enum PiteStatus pite_spectrum_from_eigenvalues(const double *values,
                                               size_t len,
                                               struct PiteSpectrum **out);

/**
 * Eigenvalues of the periodic Heisenberg chain with `sites` spins.
 *
 * # Safety
 * `out` must be writable.
 */
enum PiteStatus pite_spectrum_heisenberg(size_t sites,
                                         double coupling,
                                         double field,
                                         struct PiteSpectrum **out);

/**
 * Number of eigenvalues; 0 for a null handle.
 *
 * # Safety
 * `spec` must be null or a live handle.
 */
size_t pite_spectrum_len(const struct PiteSpectrum *spec);

/**
 * Copies the eigenvalues into `buf` (capacity `len`).
 *
 * # Safety
 * `spec` must be a live handle and `buf` must hold `len` writable doubles.
 */
enum PiteStatus pite_spectrum_eigenvalues(const struct PiteSpectrum *spec, double *buf, size_t len);

/**
 * Smallest nonzero excitation energy.
 *
 * # Safety
 * `spec` must be a live handle; `out` must be writable.
 */
enum PiteStatus pite_spectrum_min_gap(const struct PiteSpectrum *spec, double *out);

/**
 * # Safety
 * `spec` must be null or a handle not yet freed.
 */
void pite_spectrum_free(struct PiteSpectrum *spec);

/**
 * Builds a schedule of `steps` imaginary-time steps. `kappa_bar` is only read
 * for exponential schedules.
 *
 * # Safety
 * `out` must be writable.
 */
enum PiteStatus pite_schedule_new(enum PiteScheduleKind kind,
                                  double dtau_min,
                                  double dtau_max,
                                  size_t steps,
                                  double kappa_bar,
                                  struct PiteSchedule **out);

/**
 * Number of steps; 0 for a null handle.
 *
 * # Safety
 * `sched` must be null or a live handle.
 */
size_t pite_schedule_len(const struct PiteSchedule *sched);

/**
 * Copies the step sizes into `buf` (capacity `len`).
 *
 * # Safety
 * `sched` must be a live handle and `buf` must hold `len` writable doubles.
 */
enum PiteStatus pite_schedule_steps(const struct PiteSchedule *sched, double *buf, size_t len);

/**
 * Closed-form total imaginary time.
 *
 * # Safety
 * `sched` must be a live handle; `out` must be writable.
 */
enum PiteStatus pite_schedule_cumulative(const struct PiteSchedule *sched, double *out);

/**
 * # Safety
 * `sched` must be null or a handle not yet freed.
 */
void pite_schedule_free(struct PiteSchedule *sched);

/**
 * Runs the first-order evolution with the energy shift anchored at the
 * spectrum's ground energy. `weights` may be NULL for a uniform start;
 * otherwise it holds one nonnegative weight per eigenvalue summing to 1.
 *
 * # Safety
 * Handles must be live; `weights` must be NULL or hold `weights_len` doubles;
 * `out` must be writable.
 */
enum PiteStatus pite_run(const struct PiteSpectrum *spec,
                         const double *weights,
                         size_t weights_len,
                         const struct PiteSchedule *sched,
                         double gamma,
                         double alpha,
                         int64_t branch_n,
                         struct PiteRunResult **out);

/**
 * # Safety
 * `result` must be a live handle; `out` must be writable.
 */
enum PiteStatus pite_run_result_summary(const struct PiteRunResult *result,
                                        struct PiteRunSummary *out);

/**
 * Number of eigen-weights (equal to the spectrum length); 0 for null.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
size_t pite_run_result_weights_len(const struct PiteRunResult *result);

/**
 * Number of steps (entries of the per-step success array); 0 for null.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
size_t pite_run_result_steps_len(const struct PiteRunResult *result);

/**
 * Copies the normalized final eigen-weights.
 *
 * # Safety
 * `result` must be a live handle and `buf` must hold `len` writable doubles.
 */
enum PiteStatus pite_run_result_final_weights(const struct PiteRunResult *result,
                                              double *buf,
                                              size_t len);

/**
 * Copies the per-step success probabilities `p_k`.
 *
 * # Safety
 * `result` must be a live handle and `buf` must hold `len` writable doubles.
 */
enum PiteStatus pite_run_result_step_success(const struct PiteRunResult *result,
                                             double *buf,
                                             size_t len);

/**
 * # Safety
 * `result` must be null or a handle not yet freed.
 */
void pite_run_result_free(struct PiteRunResult *result);

/**
 * Sine integral `Si(x)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PiteStatus pite_si(double x, double *out);

/**
 * Cosine integral `Ci(x)`, `x > 0`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PiteStatus pite_ci(double x, double *out);

/**
 * Entire cosine integral `Cin(x) = ∫₀ˣ (1 - cos t)/t dt`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PiteStatus pite_cin(double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PITE_LAB_H */
