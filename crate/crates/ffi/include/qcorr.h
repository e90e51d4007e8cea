#ifndef QCORR_H
#define QCORR_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QcorrLabel {
  QCORR_LABEL_ENTANGLED = 0,
  QCORR_LABEL_NONCLASSICAL_SEPARABLE = 1,
  QCORR_LABEL_CLASSICAL = 2,
} QcorrLabel;

/**
 * Result code of every call.
 */
typedef enum QcorrStatus {
  QCORR_STATUS_OK = 0,
  QCORR_STATUS_NULL_POINTER = 1,
  QCORR_STATUS_INVALID_ARGUMENT = 2,
  QCORR_STATUS_INVALID_STATE = 3,
  QCORR_STATUS_INTEGRATOR_FAILURE = 4,
  QCORR_STATUS_PARSE = 5,
  QCORR_STATUS_IO = 6,
  QCORR_STATUS_PANIC = 7,
} QcorrStatus;

/**
 * Opaque two-qubit density matrix.
 */
typedef struct QcorrState QcorrState;

/**
 * Opaque sampled trajectory.
 */
typedef struct QcorrTrajectory QcorrTrajectory;

typedef struct QcorrMeasureOptions {
  /**
   * Qubit measured for discord, 1 or 2.
   */
  uint32_t measured;
  double eps_c;
  double eps_d;
  /**
   * Fixed-basis discord for `classical_corr` when false.
   */
  bool optimized_discord;
} QcorrMeasureOptions;

/**
 * Every correlation measure of one state.
 */
typedef struct QcorrReport {
  double concurrence;
  double eof;
  double bell_m;
  double n;
  double f_max;
  double discord_fixed;
  double discord_opt;
  double classical_corr;
  double mutual_info;
  enum QcorrLabel label;
} QcorrReport;

/**
 * Dissipative model parameters. `independent` ignores `separation` and
 * `alignment` and switches off the collective terms.
 */
typedef struct QcorrDissipativeParams {
  double gamma;
  double detuning;
  /**
   * Dimensionless separation `k0·r12`.
   */
  double separation;
  double alignment;
  bool independent;
  double temperature;
  double squeezing;
  double squeezing_phase;
  double omega0;
} QcorrDissipativeParams;

/**
 * QND dephasing channel parameters.
 */
typedef struct QcorrQndParams {
  double gamma0;
  bool collective;
  double temperature;
  double squeezing;
  double squeezing_phase;
  double omega0;
} QcorrQndParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *qcorr_status_message(enum QcorrStatus status);

/**
 * Message of the most recent failure on this thread. Valid until the next
 * failing call on the same thread; empty if there was none.
 */
const char *qcorr_last_error_message(void);

/**
 * Builds a state from 16 row-major entries given as real and imaginary parts.
 *
 * # Safety
 * `re` and `im` must point to 16 readable doubles; `out` must be writable.
 */
enum QcorrStatus qcorr_state_from_entries(const double *re,
                                          const double *im,
                                          struct QcorrState **out);

/**
 * Bell state `k` in 1..=4 (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻).
 *
 * # Safety
 * `out` must be writable.
 */
enum QcorrStatus qcorr_state_bell(uint32_t k, struct QcorrState **out);

/**
 * Werner state `p|Ψ⁻⟩⟨Ψ⁻| + (1−p)I/4`, `p` in `[0, 1]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QcorrStatus qcorr_state_werner(double p, struct QcorrState **out);

/**
 * Product of two single-qubit states given by Bloch vectors.
 *
 * # Safety
 * `a` and `b` must point to 3 readable doubles; `out` must be writable.
 */
enum QcorrStatus qcorr_state_product(const double *a, const double *b, struct QcorrState **out);

/**
 * Reads a state file: the dimension, then one `re im` pair per line in
 * row-major order.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum QcorrStatus qcorr_state_read_file(const char *path, struct QcorrState **out);

/**
 * Copies the 16 row-major entries into `re` and `im`.
 *
 * # Safety
 * `state` must be a live handle; `re` and `im` must have room for 16 doubles.
 */
enum QcorrStatus qcorr_state_entries(const struct QcorrState *state, double *re, double *im);

/**
 * Releases a state. Null is ignored.
 *
 * # Safety
 * `state` must be null or a handle not yet freed.
 */
void qcorr_state_free(struct QcorrState *state);

/**
 * # Safety
 * `out` must be writable.
 */
enum QcorrStatus qcorr_measure_options_default(struct QcorrMeasureOptions *out);

/**
 * Computes every correlation measure. `opts` may be null for the defaults.
 *
 * # Safety
 * `state` must be a live handle, `opts` null or readable, `out` writable.
 */
enum QcorrStatus qcorr_measure(const struct QcorrState *state,
                               const struct QcorrMeasureOptions *opts,
                               struct QcorrReport *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum QcorrStatus qcorr_dissipative_params_default(struct QcorrDissipativeParams *out);

/**
 * Evolves `state` under the dissipative master equation and samples
 * `samples` equally spaced times in `[0, t_end]`. A non-positive `dt`
 * picks the step automatically.
 *
 * # Safety
 * `state` must be a live handle, `params` readable, `out` writable.
 */
enum QcorrStatus qcorr_evolve(const struct QcorrState *state,
                              const struct QcorrDissipativeParams *params,
                              double t_end,
                              size_t samples,
                              double dt,
                              struct QcorrTrajectory **out);

/**
 * Number of stored samples; 0 for a null handle.
 *
 * # Safety
 * `traj` must be null or a live handle.
 */
size_t qcorr_trajectory_len(const struct QcorrTrajectory *traj);

/**
 * Time of sample `index`.
 *
 * # Safety
 * `traj` must be a live handle; `out` writable.
 */
enum QcorrStatus qcorr_trajectory_time(const struct QcorrTrajectory *traj,
                                       size_t index,
                                       double *out);

/**
 * Copy of the state at sample `index`, as a new handle.
 *
 * # Safety
 * `traj` must be a live handle; `out` writable.
 */
enum QcorrStatus qcorr_trajectory_state(const struct QcorrTrajectory *traj,
                                        size_t index,
                                        struct QcorrState **out);

/**
 * Releases a trajectory. Null is ignored.
 *
 * # Safety
 * `traj` must be null or a handle not yet freed.
 */
void qcorr_trajectory_free(struct QcorrTrajectory *traj);

/**
 * # Safety
 * `out` must be writable.
 */
enum QcorrStatus qcorr_qnd_params_default(struct QcorrQndParams *out);

/**
 * Applies the QND dephasing channel at time `t` with the default kernel.
 *
 * # Safety
 * `state` must be a live handle, `params` readable, `out` writable.
 */
enum QcorrStatus qcorr_qnd_apply(const struct QcorrState *state,
                                 const struct QcorrQndParams *params,
                                 double t,
                                 struct QcorrState **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCORR_H */
