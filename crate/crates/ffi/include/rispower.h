#ifndef RISPOWER_H
#define RISPOWER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call.
 */
typedef enum RispowerStatus {
  RISPOWER_STATUS_OK = 0,
  RISPOWER_STATUS_NULL_POINTER = 1,
  /**
   * Invalid descriptor, coding state, argument or power string.
   */
  RISPOWER_STATUS_VALIDATION = 2,
  RISPOWER_STATUS_IO = 3,
  RISPOWER_STATUS_OVERFLOW = 4,
  RISPOWER_STATUS_MISSING_CONTROL_BOARD_POWER = 5,
  RISPOWER_STATUS_UNKNOWN_KEY = 6,
  RISPOWER_STATUS_INVALID_UTF8 = 7,
  RISPOWER_STATUS_PANIC = 8,
} RispowerStatus;

/**
 * Opaque handle to a validated descriptor.
 */
typedef struct RispowerDescriptor RispowerDescriptor;

/**
 * Static power, all powers in microwatts.
 */
typedef struct RispowerStaticBreakdown {
  uint64_t control_board_power_uw;
  uint64_t drive_circuit_count;
  uint64_t per_circuit_power_uw;
  uint64_t total_drive_power_uw;
  uint64_t static_total_uw;
} RispowerStaticBreakdown;

/**
 * Static plus dynamic power, in microwatts.
 */
typedef struct RispowerPowerBreakdown {
  struct RispowerStaticBreakdown static_breakdown;
  uint64_t dynamic_uw;
  uint64_t total_uw;
} RispowerPowerBreakdown;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or "" after a success.
 * The pointer stays valid until the next `rispower_*` call on this thread.
 */
const char *rispower_last_error_message(void);

/**
 * Built-in catalog device: "pin-16x16", "varactor-8x16" or "rfswitch-8x8".
 *
 * # Safety
 * `key` must be a NUL-terminated string; `out` must be writable.
 */
enum RispowerStatus rispower_builtin(const char *key, struct RispowerDescriptor **out);

/**
 * Parses a descriptor document. When `require_control_board_power` is
 * false, a missing board power is accepted and reported later by
 * `rispower_static_breakdown`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum RispowerStatus rispower_descriptor_from_json(const char *json,
                                                  bool require_control_board_power,
                                                  struct RispowerDescriptor **out);

/**
 * Reads a descriptor file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum RispowerStatus rispower_descriptor_load(const char *path,
                                             bool require_control_board_power,
                                             struct RispowerDescriptor **out);

/**
 * Canonical JSON of a descriptor, or null on a null handle. Release with
 * `rispower_string_free`.
 *
 * # Safety
 * `descriptor` must be null or a live handle.
 */
char *rispower_descriptor_to_json(const struct RispowerDescriptor *descriptor);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void rispower_string_free(char *s);

/**
 * # Safety
 * `descriptor` must be null or a live handle, freed once.
 */
void rispower_descriptor_free(struct RispowerDescriptor *descriptor);

/**
 * New handle equal to `descriptor` with its control-board power replaced.
 *
 * # Safety
 * `descriptor` must be a live handle; `out` must be writable.
 */
enum RispowerStatus rispower_descriptor_with_control_board_power(const struct RispowerDescriptor *descriptor,
                                                                 uint64_t power_uw,
                                                                 struct RispowerDescriptor **out);

/**
 * # Safety
 * `descriptor` must be a live handle; `out` must be writable.
 */
enum RispowerStatus rispower_cell_count(const struct RispowerDescriptor *descriptor, uint64_t *out);

/**
 * Adjustable components needing a control signal (N_c).
 *
 * # Safety
 * `descriptor` must be a live handle; `out` must be writable.
 */
enum RispowerStatus rispower_component_count(const struct RispowerDescriptor *descriptor,
                                             uint64_t *out);

/**
 * Cells sharing one control signal (N_g).
 *
 * # Safety
 * `descriptor` must be a live handle; `out` must be writable.
 */
enum RispowerStatus rispower_group_size(const struct RispowerDescriptor *descriptor, uint64_t *out);

/**
 * ⌈component_count / (group_size · signals_per_circuit)⌉. Zero divisors
 * are a validation error.
 *
 * # Safety
 * `out` must be writable.
 */
enum RispowerStatus rispower_drive_circuit_count(uint64_t component_count,
                                                 uint64_t group_size,
                                                 uint64_t signals_per_circuit,
                                                 uint64_t *out);

/**
 * # Safety
 * `descriptor` must be a live handle; `out` must be writable.
 */
enum RispowerStatus rispower_static_breakdown(const struct RispowerDescriptor *descriptor,
                                              struct RispowerStaticBreakdown *out);

/**
 * Total power for one coding state of `cell_count` row-major cell values.
 *
 * # Safety
 * `descriptor` must be a live handle; `cells` must point to `cell_count`
 * readable values (or be null when `cell_count` is 0); `out` must be writable.
 */
enum RispowerStatus rispower_total_power(const struct RispowerDescriptor *descriptor,
                                         const uint64_t *cells,
                                         size_t cell_count,
                                         struct RispowerPowerBreakdown *out);

/**
 * Largest dynamic power over all coding states, in microwatts.
 *
 * # Safety
 * `descriptor` must be a live handle; `out` must be writable.
 */
enum RispowerStatus rispower_worst_case_dynamic(const struct RispowerDescriptor *descriptor,
                                                uint64_t *out);

/**
 * Parses strings such as "0.066 mW" into exact microwatts.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum RispowerStatus rispower_parse_power(const char *text, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RISPOWER_H */
