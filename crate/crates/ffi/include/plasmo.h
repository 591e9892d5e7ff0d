#ifndef PLASMO_H
#define PLASMO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum PlasmoStatus {
  PlasmoOk = 0,
  PlasmoNullArg = 1,
  PlasmoInvalidUtf8 = 2,
  PlasmoInvalidConfig = 3,
  PlasmoRunError = 4,
  PlasmoBufferTooSmall = 5,
  PlasmoPanic = 6,
} PlasmoStatus;

/**
 * An in-flight experiment run; opaque to C.
 */
typedef struct PlasmoSim PlasmoSim;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *plasmo_version(void);

/**
 * Copy the most recent error message for this thread into `buf`
 * (NUL-terminated, truncated to `len`). Returns the full message length.
 */
size_t plasmo_last_error(char *buf, size_t len);

/**
 * Build a simulation from a TOML experiment config (same format the CLI
 * reads) at the given seed. On success stores a heap handle in `out`;
 * release it with [`plasmo_sim_free`].
 *
 * # Safety
 * `config_toml` must be a valid NUL-terminated string and `out` a valid
 * pointer.
 */
enum PlasmoStatus plasmo_sim_new(const char *config_toml, uint64_t seed, struct PlasmoSim **out);

/**
 * Advance the simulation by at most `steps` scheduler steps, stopping
 * early when the run halts. `done` (optional) reports whether the run has
 * finished.
 *
 * # Safety
 * `sim` must be a live handle from [`plasmo_sim_new`].
 */
enum PlasmoStatus plasmo_sim_step(struct PlasmoSim *sim, uint64_t steps, bool *done);

/**
 * Current scheduler step count.
 *
 * # Safety
 * `sim` must be a live handle (null returns 0).
 */
uint64_t plasmo_sim_step_count(const struct PlasmoSim *sim);

/**
 * Current number of live particles.
 *
 * # Safety
 * `sim` must be a live handle (null returns 0).
 */
uint64_t plasmo_sim_population(const struct PlasmoSim *sim);

/**
 * Mean particle position.
 *
 * # Safety
 * `sim`, `x`, `y` must be valid pointers.
 */
enum PlasmoStatus plasmo_sim_centroid(const struct PlasmoSim *sim, double *x, double *y);

/**
 * Lattice dimensions.
 *
 * # Safety
 * All pointers must be valid.
 */
enum PlasmoStatus plasmo_sim_size(const struct PlasmoSim *sim, uint32_t *width, uint32_t *height);

/**
 * Render the current state as 8-bit greyscale (row-major, particles at
 * 255 over the clamped trail field) into a caller buffer of at least
 * width*height bytes.
 *
 * # Safety
 * `buf` must point to at least `len` writable bytes.
 */
enum PlasmoStatus plasmo_sim_render(const struct PlasmoSim *sim, uint8_t *buf, size_t len);

/**
 * Run an experiment to completion and report its scored error (final
 * distance for centroid/mean runs, time-averaged tracking error) and halt
 * step.
 *
 * # Safety
 * `config_toml` must be a valid NUL-terminated string; out pointers may be
 * null if the caller does not need them.
 */
enum PlasmoStatus plasmo_run_experiment(const char *config_toml,
                                        uint64_t seed,
                                        double *out_error,
                                        uint64_t *out_halt_step);

/**
 * Release a handle from [`plasmo_sim_new`]. Null is a no-op.
 *
 * # Safety
 * `sim` must be a handle from [`plasmo_sim_new`] not yet freed.
 */
void plasmo_sim_free(struct PlasmoSim *sim);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLASMO_H */
