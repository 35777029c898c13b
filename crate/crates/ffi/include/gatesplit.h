#ifndef GATESPLIT_H
#define GATESPLIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. The numeric values match the CLI exit codes where both exist.
typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_NULL_POINTER = 1,
  GS_STATUS_INVALID_ARGUMENT = 2,
  GS_STATUS_DATA = 3,
  GS_STATUS_NUMERICAL = 4,
  GS_STATUS_PANIC = 5,
} GsStatus;

// A unitary gate with its subsystem partition.
typedef struct GsGate GsGate;

// The outcome of a separation search.
typedef struct GsSeparation GsSeparation;

// Minimum gate fidelity between two gates.
typedef struct GsFidelity {
  double f_min;
  double d_max;
  // Whether the chord formula applies, i.e. the spectrum fits in a half-plane.
  bool formula_valid;
  double epsilon_achieved;
} GsFidelity;

// Swarm settings for [`gs_separate`]. Pass NULL to use the defaults.
typedef struct GsPsoOptions {
  size_t swarm_size;
  size_t iterations;
  size_t restarts;
} GsPsoOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL.
// The pointer stays valid until the next call into this library on the same thread.
const char *gs_last_error_message(void);

// Built-in gate by name: `cnot`, `swap`, `cz` or `identity4`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum GsStatus gs_gate_fixture(const char *name, struct GsGate **out);

// Parses a gate document `{"dims": [...], "matrix": [[{"re":..,"im":..}, ...], ...]}`.
// Slightly non-unitary input is projected onto the nearest unitary.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum GsStatus gs_gate_from_json(const char *json, struct GsGate **out);

// Builds a gate from row-major real and imaginary parts (`dim * dim` each)
// and a partition whose product is `dim`. The matrix must be unitary to 1e-8.
//
// # Safety
// `dims` must point to `n_dims` values, `re` and `im` to `len` values each.
enum GsStatus gs_gate_from_parts(const size_t *dims,
                                 size_t n_dims,
                                 const double *re,
                                 const double *im,
                                 size_t len,
                                 struct GsGate **out);

// # Safety
// `gate` must be NULL or a handle from this library that has not been freed.
void gs_gate_free(struct GsGate *gate);

// Total Hilbert-space dimension, or 0 for NULL.
//
// # Safety
// `gate` must be NULL or a live handle.
size_t gs_gate_dim(const struct GsGate *gate);

// Serializes a gate to JSON. Free the string with [`gs_string_free`].
//
// # Safety
// `gate` must be a live handle and `out` a valid pointer.
enum GsStatus gs_gate_to_json(const struct GsGate *gate, char **out);

// Minimum fidelity of `b` as an approximation of `a` over all pure inputs.
//
// # Safety
// `a` and `b` must be live handles and `out` a valid pointer.
enum GsStatus gs_gate_fidelity(const struct GsGate *a,
                               const struct GsGate *b,
                               struct GsFidelity *out);

// Largest spectral chord compatible with infidelity `epsilon` in `[0, 1]`.
//
// # Safety
// `out` must be a valid pointer.
enum GsStatus gs_epsilon_to_dmax(double epsilon, double *out);

// Infidelity implied by a spectral chord `d_max` in `[0, 2]`.
//
// # Safety
// `out` must be a valid pointer.
enum GsStatus gs_dmax_to_epsilon(double d_max, double *out);

// Searches for local unitaries on the subsystems `dims` whose tensor product
// best approximates `target`. `options` may be NULL for the default swarm.
//
// # Safety
// `target` must be a live handle, `dims` must point to `n_dims` values,
// `options` must be NULL or valid, and `out` a valid pointer.
enum GsStatus gs_separate(const struct GsGate *target,
                          const size_t *dims,
                          size_t n_dims,
                          uint64_t seed,
                          const struct GsPsoOptions *options,
                          struct GsSeparation **out);

// # Safety
// `sep` must be NULL or a live handle.
double gs_separation_f_min(const struct GsSeparation *sep);

// # Safety
// `sep` must be NULL or a live handle.
double gs_separation_d_max(const struct GsSeparation *sep);

// The optimized product gate as a new handle.
//
// # Safety
// `sep` must be a live handle and `out` a valid pointer.
enum GsStatus gs_separation_product(const struct GsSeparation *sep, struct GsGate **out);

// Full result as JSON. Free the string with [`gs_string_free`].
//
// # Safety
// `sep` must be a live handle and `out` a valid pointer.
enum GsStatus gs_separation_to_json(const struct GsSeparation *sep, char **out);

// # Safety
// `sep` must be NULL or a handle from this library that has not been freed.
void gs_separation_free(struct GsSeparation *sep);

// # Safety
// `s` must be NULL or a string returned by this library that has not been freed.
void gs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GATESPLIT_H */
