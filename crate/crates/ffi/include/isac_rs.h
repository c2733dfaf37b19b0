#ifndef ISAC_RS_H
#define ISAC_RS_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum IsacStatus {
  ISAC_STATUS_OK = 0,
  /**
   * Malformed or out-of-range input.
   */
  ISAC_STATUS_INPUT = 2,
  ISAC_STATUS_INFEASIBLE = 3,
  ISAC_STATUS_NUMERIC = 4,
  ISAC_STATUS_NULL_POINTER = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  ISAC_STATUS_PANIC = 6,
} IsacStatus;

/**
 * Opaque scenario handle.
 */
typedef struct IsacScenario IsacScenario;

typedef struct IsacCrb {
  /**
   * Range bound, m².
   */
  double crb_range;
  /**
   * Velocity bound, (m/s)².
   */
  double crb_velocity;
  /**
   * η·crb_range + (1 − η)·crb_velocity.
   */
  double crb_weighted;
} IsacCrb;

typedef struct IsacDesign {
  uint32_t pc;
  uint32_t ps;
  double crb_weighted;
  /**
   * bit/s.
   */
  double rate;
  bool feasible;
} IsacDesign;

/**
 * `status` is 0 solved, 1 infeasible, 2 relaxed solution only.
 * Fields guarded by a `has_` flag are zero when the flag is false.
 */
typedef struct IsacOutcome {
  uint32_t status;
  double c_min;
  bool has_relaxed;
  double relaxed_pc;
  double relaxed_ps;
  bool has_rounded;
  struct IsacDesign rounded;
  bool has_exhaustive;
  struct IsacDesign exhaustive;
  double gap_rel;
} IsacOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated library version.
 */
const char *isac_version(void);

/**
 * Message for the last failed call on this thread, or NULL after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *isac_last_error_message(void);

/**
 * Reference scenario with the default channel profile.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum IsacStatus isac_scenario_reference(struct IsacScenario **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` as in [`isac_scenario_reference`].
 */
enum IsacStatus isac_scenario_from_json(const char *json, struct IsacScenario **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` as in [`isac_scenario_reference`].
 */
enum IsacStatus isac_scenario_load(const char *path, struct IsacScenario **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `scenario` must come from this library and not be used afterwards.
 */
void isac_scenario_free(struct IsacScenario *scenario);

/**
 * # Safety
 * `scenario` must be a live handle.
 */
enum IsacStatus isac_scenario_set_eta(struct IsacScenario *scenario, double eta);

/**
 * # Safety
 * `scenario` must be a live handle.
 */
enum IsacStatus isac_scenario_set_rate_floor(struct IsacScenario *scenario, double c_min_bps);

/**
 * Closed-form bounds at real-valued intervals.
 *
 * # Safety
 * `scenario` must be a live handle and `out` writable.
 */
enum IsacStatus isac_crb_closed(const struct IsacScenario *scenario,
                                double pc,
                                double ps,
                                struct IsacCrb *out);

/**
 * Bounds from the assembled Fisher information of an integer pattern.
 *
 * # Safety
 * `scenario` must be a live handle and `out` writable.
 */
enum IsacStatus isac_crb_fim(const struct IsacScenario *scenario,
                             uint32_t pc,
                             uint32_t ps,
                             struct IsacCrb *out);

/**
 * Achievable rate in bit/s of an integer pattern.
 *
 * # Safety
 * `scenario` must be a live handle and `out` writable.
 */
enum IsacStatus isac_rate(const struct IsacScenario *scenario,
                          uint32_t pc,
                          uint32_t ps,
                          double *out);

/**
 * Highest rate reachable inside the scenario's search box.
 *
 * # Safety
 * `scenario` must be a live handle and `out` writable.
 */
enum IsacStatus isac_max_rate(const struct IsacScenario *scenario, double *out);

/**
 * Relaxed, rounded and exhaustive designs at the scenario's rate floor.
 * Returns `Infeasible` when no pattern meets the floor; `out` is still filled.
 *
 * # Safety
 * `scenario` must be a live handle and `out` writable.
 */
enum IsacStatus isac_optimize(const struct IsacScenario *scenario, struct IsacOutcome *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISAC_RS_H */
