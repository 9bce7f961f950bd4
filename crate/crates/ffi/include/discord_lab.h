/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef DISCORD_LAB_H
#define DISCORD_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * 0 = branch a, 1 = branch b, 2 = degenerate.
 */
typedef enum DlBranch {
  DL_BRANCH_A = 0,
  DL_BRANCH_B = 1,
  DL_BRANCH_DEGENERATE = 2,
} DlBranch;

typedef enum DlStatus {
  DL_STATUS_OK = 0,
  DL_STATUS_NULL_POINTER = 1,
  DL_STATUS_INVALID_ARGUMENT = 2,
  DL_STATUS_UNPHYSICAL = 3,
  DL_STATUS_NOT_STANDARD_FORM = 4,
  DL_STATUS_INSUFFICIENT_DATA = 5,
  DL_STATUS_DEGENERATE_BOOTSTRAP = 6,
  DL_STATUS_NUMERICAL = 7,
  DL_STATUS_IO = 8,
  DL_STATUS_PANIC = 99,
} DlStatus;

typedef enum DlUnits {
  DL_UNITS_BITS = 0,
  DL_UNITS_NATS = 1,
} DlUnits;

/**
 * Opaque two-mode covariance in standard form.
 */
typedef struct DlCovariance DlCovariance;

/**
 * Opaque set of quadrature samples.
 */
typedef struct DlSamples DlSamples;

typedef struct DlInvariants {
  double i1;
  double i2;
  double i3;
  double i4;
  double delta;
  double nu_minus;
  double nu_plus;
  double nu_tilde_minus;
} DlInvariants;

typedef struct DlMeasureReport {
  double mutual_info;
  double classical_info;
  double discord;
  double log_negativity;
  double e_min;
  bool separable;
  enum DlBranch branch;
} DlMeasureReport;

/**
 * Point estimates with bootstrap standard errors.
 */
typedef struct DlEstimate {
  struct DlMeasureReport point;
  double mutual_info_err;
  double classical_info_err;
  double discord_err;
  double log_negativity_err;
  size_t projected;
  size_t violations;
} DlEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *dl_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *dl_version(void);

/**
 * Builds a standard-form covariance and checks physicality.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum DlStatus dl_covariance_new(double a_xx,
                                double a_pp,
                                double b_xx,
                                double b_pp,
                                double c_x,
                                double c_p,
                                struct DlCovariance **out);

/**
 * Parses a covariance from JSON (named fields, 4x4 or flat 16-element array).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` as in [`dl_covariance_new`].
 */
enum DlStatus dl_covariance_from_json(const char *json, double tol, struct DlCovariance **out);

/**
 * Copies the six entries (a_xx, a_pp, b_xx, b_pp, c_x, c_p) into `values`.
 *
 * # Safety
 * `cov` must be a live handle and `values` must point to six writable doubles.
 */
enum DlStatus dl_covariance_entries(const struct DlCovariance *cov, double *values);

/**
 * # Safety
 * `cov` must be NULL or a handle not yet freed.
 */
void dl_covariance_free(struct DlCovariance *cov);

/**
 * Two-mode squeezed vacuum with squeezing parameter `r`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum DlStatus dl_tmsv(double r, struct DlCovariance **out);

/**
 * Thermal state of variance 1 + `modulation` split on a balanced beamsplitter.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum DlStatus dl_split_thermal(double modulation, struct DlCovariance **out);

/**
 * Two identical squeezers interfered on a balanced beamsplitter.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum DlStatus dl_two_mode_from_squeezers(double squeezing_db,
                                         double antisqueezing_db,
                                         struct DlCovariance **out);

/**
 * Pure-loss channel of transmittance `t` on mode B. Writes a new handle.
 *
 * # Safety
 * `cov` must be a live handle; `out` as in [`dl_covariance_new`].
 */
enum DlStatus dl_attenuate_mode_b(const struct DlCovariance *cov,
                                  double t,
                                  struct DlCovariance **out);

/**
 * Classical Gaussian noise of variance `kappa` on both quadratures of mode B.
 *
 * # Safety
 * `cov` must be a live handle; `out` as in [`dl_covariance_new`].
 */
enum DlStatus dl_add_noise_mode_b(const struct DlCovariance *cov,
                                  double kappa,
                                  struct DlCovariance **out);

/**
 * # Safety
 * `cov` must be a live handle and `out` a valid pointer.
 */
enum DlStatus dl_invariants(const struct DlCovariance *cov, struct DlInvariants *out);

/**
 * Mutual information, classical correlation, discord and log-negativity.
 *
 * # Safety
 * `cov` must be a live handle and `out` a valid pointer.
 */
enum DlStatus dl_measure(const struct DlCovariance *cov,
                         enum DlUnits units,
                         struct DlMeasureReport *out);

/**
 * Numerical minimum of the conditional determinant over general-dyne
 * measurements on mode B. `grid_size` of 0 uses the default grid.
 *
 * # Safety
 * `cov` must be a live handle and `out` a valid pointer.
 */
enum DlStatus dl_oracle_e_min(const struct DlCovariance *cov, size_t grid_size, double *out);

/**
 * Draws `n` seeded samples (x_a, p_a, x_b, p_b).
 *
 * # Safety
 * `cov` must be a live handle; `out` must point to writable storage for one handle.
 */
enum DlStatus dl_sample(const struct DlCovariance *cov,
                        size_t n,
                        uint64_t seed,
                        struct DlSamples **out);

/**
 * Wraps `n` rows of four doubles, row-major, as a sample handle.
 *
 * # Safety
 * `rows` must point to `4 * n` readable doubles; `out` to storage for one handle.
 */
enum DlStatus dl_samples_from_rows(const double *rows, size_t n, struct DlSamples **out);

/**
 * Number of rows in the sample set, 0 for NULL.
 *
 * # Safety
 * `samples` must be NULL or a live handle.
 */
size_t dl_samples_len(const struct DlSamples *samples);

/**
 * Copies up to `capacity` rows into `rows` (row-major, four doubles each)
 * and reports how many were written in `written`.
 *
 * # Safety
 * `samples` must be a live handle, `rows` must hold `4 * capacity` doubles.
 */
enum DlStatus dl_samples_copy(const struct DlSamples *samples,
                              double *rows,
                              size_t capacity,
                              size_t *written);

/**
 * # Safety
 * `samples` must be NULL or a handle not yet freed.
 */
void dl_samples_free(struct DlSamples *samples);

/**
 * Bootstrap estimate of all measures from a sample set.
 *
 * # Safety
 * `samples` must be a live handle and `out` a valid pointer.
 */
enum DlStatus dl_estimate(const struct DlSamples *samples,
                          size_t resamples,
                          uint64_t seed,
                          enum DlUnits units,
                          struct DlEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISCORD_LAB_H */
