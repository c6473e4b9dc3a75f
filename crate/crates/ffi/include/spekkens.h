#ifndef SPEKKENS_H
#define SPEKKENS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define SPK_OK 0

#define SPK_ERR_NULL_POINTER 1

#define SPK_ERR_INVALID_UTF8 2

#define SPK_ERR_PANIC 3

#define SPK_ERR_MIXED_MODULUS 10

#define SPK_ERR_DIMENSION_MISMATCH 11

#define SPK_ERR_INVALID_MODULUS 12

#define SPK_ERR_TOO_LARGE 13

#define SPK_ERR_ZERO_OBSERVABLE 20

#define SPK_ERR_INVALID_OUTCOME 21

#define SPK_ERR_INCONSISTENT_OUTCOMES 22

#define SPK_ERR_NOT_COARSE 23

#define SPK_ERR_NOT_COMMUTING 24

#define SPK_ERR_COARSE_GENERATOR 25

#define SPK_ERR_NOT_ISOTROPIC 26

#define SPK_ERR_IMPOSSIBLE_OUTCOME 30

#define SPK_ERR_EVEN_DIMENSION 31

#define SPK_ERR_INCONSISTENT 32

#define SPK_ERR_NOT_PROJECTOR 33

#define SPK_ERR_INVALID_STATE 40

#define SPK_ERR_SYNTAX 50

#define SPK_ERR_INDEX_OUT_OF_RANGE 51

#define SPK_ERR_DOCUMENT 60

/**
 * One element of a sharp measurement.
 */
typedef struct SpkMeasurement SpkMeasurement;

/**
 * An epistemic state (V, w).
 */
typedef struct SpkState SpkState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *spk_last_error(void);

void spk_string_free(char *s);

/**
 * Parses a JSON state document.
 */
int32_t spk_state_from_json(const char *json, struct SpkState **out);

/**
 * Canonical JSON document of the state.
 */
int32_t spk_state_to_json(const struct SpkState *state, char **out);

void spk_state_free(struct SpkState *state);

/**
 * Writes d and n of the state's phase space.
 */
int32_t spk_state_dims(const struct SpkState *state, uint64_t *d, size_t *n);

/**
 * Number of points in the ontic support.
 */
int32_t spk_state_support_size(const struct SpkState *state, uint64_t *out);

/**
 * The state's distribution as a text grid.
 */
int32_t spk_state_grid(const struct SpkState *state, char **out);

/**
 * The state's exact Wigner function as a text grid (odd d only).
 */
int32_t spk_wigner_grid(const struct SpkState *state, char **out);

/**
 * Builds the element on which each observable expression `observables[i]`
 * reads `outcomes[i]`, on the phase space of `state`.
 */
int32_t spk_measurement_new(const struct SpkState *state,
                            const char *const *observables,
                            const uint64_t *outcomes,
                            size_t count,
                            struct SpkMeasurement **out);

void spk_measurement_free(struct SpkMeasurement *element);

/**
 * Exact outcome probability as numerator / denominator.
 */
int32_t spk_outcome_probability(const struct SpkState *state,
                                const struct SpkMeasurement *element,
                                int64_t *numerator,
                                int64_t *denominator);

/**
 * Posterior state after observing `element`. Fails with
 * `SPK_ERR_IMPOSSIBLE_OUTCOME` when the outcome has probability 0.
 */
int32_t spk_update(const struct SpkState *state,
                   const struct SpkMeasurement *element,
                   struct SpkState **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPEKKENS_H */
