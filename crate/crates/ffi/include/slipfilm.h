#ifndef SLIPFILM_H
#define SLIPFILM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfModel {
  SF_MODEL_STRONG_SLIP = 0,
  SF_MODEL_SCALED_STRONG_SLIP = 1,
  SF_MODEL_FREE_FILM = 2,
  SF_MODEL_STOKES = 3,
  SF_MODEL_NO_CAPILLARITY = 4,
  SF_MODEL_REGULARIZED = 5,
  SF_MODEL_INTERMEDIATE_SLIP = 6,
  SF_MODEL_WEAK_SLIP = 7,
} SfModel;

/**
 * Result codes. Zero is success.
 */
typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_USAGE = 2,
  SF_STATUS_INVALID_PARAMETER = 3,
  SF_STATUS_DOMAIN = 4,
  SF_STATUS_POSITIVITY = 5,
  SF_STATUS_SINGULAR = 6,
  SF_STATUS_DIVERGENCE = 7,
  SF_STATUS_NON_CONVERGENCE = 8,
  SF_STATUS_CONFIG = 9,
  SF_STATUS_SNAPSHOT = 10,
  SF_STATUS_IO = 11,
  SF_STATUS_BUFFER_TOO_SMALL = 12,
  SF_STATUS_PANIC = 13,
} SfStatus;

/**
 * Opaque simulation handle.
 */
typedef struct SfSimulation SfSimulation;

/**
 * Physical parameters. `beta` may be `INFINITY`.
 */
typedef struct SfParams {
  double re;
  double beta;
  double sigma;
  double nu;
  double alpha;
  double b;
  double eps;
} SfParams;

/**
 * Adaptive step control; `dt_min == dt == dt_max` gives fixed steps.
 */
typedef struct SfControl {
  double dt;
  double dt_min;
  double dt_max;
  double cfl_factor;
  double energy_guard_tol;
  double h_floor;
} SfControl;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *sf_last_error_message(void);

/**
 * Documented default parameters.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `SfParams`.
 */
enum SfStatus sf_params_default(struct SfParams *out);

/**
 * Default step control of a run.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `SfControl`.
 */
enum SfStatus sf_control_default(struct SfControl *out);

/**
 * Disjoining pressure `1/h^3 - alpha/h^4`.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum SfStatus sf_pi(double h, double alpha, double *out);

/**
 * `d Pi / dh`.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum SfStatus sf_pi_prime(double h, double alpha, double *out);

/**
 * Integrated pressure with `Pi_1' = h Pi'`.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum SfStatus sf_pi1(double h, double alpha, double *out);

/**
 * Potential `U` with `U' = Pi`.
 *
 * # Safety
 * `out` must be null or point to a writable `double`.
 */
enum SfStatus sf_potential(double h, double alpha, double *out);

/**
 * New simulation on `n` cells from `h = mean + amp cos(k pi x)` and
 * `u = u_amp sin(pi x)`, using the default step control.
 *
 * # Safety
 * `params` must be null or point to a valid `SfParams`; `out` must be null
 * or point to writable storage for one handle pointer.
 */
enum SfStatus sf_simulation_new_cosine(enum SfModel model,
                                       const struct SfParams *params,
                                       size_t n,
                                       double mean,
                                       double amp,
                                       uint32_t k,
                                       double u_amp,
                                       struct SfSimulation **out);

/**
 * New simulation from configuration text (the format read by the CLI).
 * A `[study]` block is rejected.
 *
 * # Safety
 * `config` must be null or a NUL-terminated string; `out` as for
 * [`sf_simulation_new_cosine`].
 */
enum SfStatus sf_simulation_from_config(const char *config, struct SfSimulation **out);

/**
 * New simulation resuming a snapshot file.
 *
 * # Safety
 * `path` must be null or a NUL-terminated string; `out` as for
 * [`sf_simulation_new_cosine`].
 */
enum SfStatus sf_simulation_load(const char *path, struct SfSimulation **out);

/**
 * Writes the current state as a snapshot file.
 *
 * # Safety
 * `sim` must be null or a live handle; `path` a NUL-terminated string.
 */
enum SfStatus sf_simulation_save(const struct SfSimulation *sim, const char *path);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `sim` must be null or a handle not yet freed.
 */
void sf_simulation_free(struct SfSimulation *sim);

/**
 * Replaces the step control used by [`sf_simulation_advance`].
 *
 * # Safety
 * `sim` must be null or a live handle; `control` null or valid.
 */
enum SfStatus sf_simulation_set_control(struct SfSimulation *sim, const struct SfControl *control);

/**
 * Advances adaptively to `t_end`. On a step-size collapse the handle keeps
 * the last accepted state; on any other failure it is left unchanged.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
enum SfStatus sf_simulation_advance(struct SfSimulation *sim, double t_end);

/**
 * One step of size `dt`, no adaptivity or energy guard.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
enum SfStatus sf_simulation_step(struct SfSimulation *sim, double dt);

/**
 * Number of cells `n`; heights have `n` entries, velocities `n + 1`.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
size_t sf_simulation_cells(const struct SfSimulation *sim);

/**
 * Current time, NaN for a null handle.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
double sf_simulation_time(const struct SfSimulation *sim);

/**
 * Mass `int h dx`, NaN for a null handle.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
double sf_simulation_mass(const struct SfSimulation *sim);

/**
 * Total energy of the current state.
 *
 * # Safety
 * `sim` must be null or a live handle; `out` null or a writable `double`.
 */
enum SfStatus sf_simulation_energy(const struct SfSimulation *sim, double *out);

/**
 * Model kind of the handle.
 *
 * # Safety
 * `sim` must be null or a live handle; `out` null or writable.
 */
enum SfStatus sf_simulation_model(const struct SfSimulation *sim, enum SfModel *out);

/**
 * Copies the `n` cell heights into `buf`.
 *
 * # Safety
 * `sim` must be null or a live handle; `buf` null or writable for `len` doubles.
 */
enum SfStatus sf_simulation_height(const struct SfSimulation *sim, double *buf, size_t len);

/**
 * Copies the `n + 1` node velocities into `buf`.
 *
 * # Safety
 * `sim` must be null or a live handle; `buf` null or writable for `len` doubles.
 */
enum SfStatus sf_simulation_velocity(const struct SfSimulation *sim, double *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLIPFILM_H */
