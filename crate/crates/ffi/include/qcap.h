#ifndef QCAP_H
#define QCAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QcapStatus {
  QCAP_STATUS_OK = 0,
  QCAP_STATUS_NULL_POINTER = 1,
  QCAP_STATUS_INVALID_UTF8 = 2,
  QCAP_STATUS_PARSE = 3,
  QCAP_STATUS_OUT_OF_RANGE = 4,
  QCAP_STATUS_UNSUPPORTED = 5,
  QCAP_STATUS_DIVERGENT = 6,
  QCAP_STATUS_NOT_COVARIANT = 7,
  QCAP_STATUS_DIMENSION_TOO_LARGE = 8,
  QCAP_STATUS_INVALID_INPUT = 9,
  QCAP_STATUS_PANIC = 10,
} QcapStatus;

/**
 * Opaque channel handle.
 */
typedef struct QcapChannel QcapChannel;

/**
 * Two-way capacity sandwich. The name pointers are static and never freed.
 */
typedef struct QcapBounds {
  double lower;
  double upper;
  bool exact;
  const char *lower_name;
  const char *upper_name;
} QcapBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Owned by the library.
 */
const char *qcap_last_error(void);

/**
 * Parses `family:key=value,...` into a new handle released by [`qcap_channel_free`].
 *
 * # Safety
 * `spec` must be a nul-terminated string and `out` a valid pointer.
 */
enum QcapStatus qcap_channel_parse(const char *spec, struct QcapChannel **out);

/**
 * Releases a handle from [`qcap_channel_parse`]; null is ignored.
 *
 * # Safety
 * `ch` must come from [`qcap_channel_parse`] and not be used afterwards.
 */
void qcap_channel_free(struct QcapChannel *ch);

/**
 * Best closed-form bounds on the two-way capacity.
 *
 * # Safety
 * `ch` must be a live handle and `out` a valid pointer.
 */
enum QcapStatus qcap_two_way_capacity(const struct QcapChannel *ch, struct QcapBounds *out);

/**
 * Relative entropy of entanglement of the Choi matrix, in bits (may be infinite).
 *
 * # Safety
 * `ch` must be a live handle and `out` a valid pointer.
 */
enum QcapStatus qcap_entanglement_flux(const struct QcapChannel *ch, double *out);

/**
 * Reverse coherent information, floored at zero.
 *
 * # Safety
 * `ch` must be a live handle and `out` a valid pointer.
 */
enum QcapStatus qcap_reverse_coherent_info(const struct QcapChannel *ch, double *out);

/**
 * Finite-`mu` relative entropy that tends to the flux of a Gaussian channel.
 *
 * # Safety
 * `ch` must be a live handle and `out` a valid pointer.
 */
enum QcapStatus qcap_flux_numeric_limit(const struct QcapChannel *ch, double mu, double *out);

/**
 * Simulates a discrete-variable channel by teleportation over its Choi matrix.
 * A channel that is not covariant reports `covariant = false` and status OK.
 *
 * # Safety
 * `ch` must be a live handle; `covariant` and `distance` must be valid pointers.
 */
enum QcapStatus qcap_stretch_check(const struct QcapChannel *ch, bool *covariant, double *distance);

/**
 * Ideal key rate of a one-parameter protocol token such as `"no-switching"`.
 *
 * # Safety
 * `protocol` must be a nul-terminated string and `out` a valid pointer.
 */
enum QcapStatus qcap_qkd_rate(const char *protocol, double eta, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCAP_H */
