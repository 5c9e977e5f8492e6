#ifndef WARDPLAN_H
#define WARDPLAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WpStatus {
  WP_STATUS_OK = 0,
  WP_STATUS_INFEASIBLE = 2,
  WP_STATUS_BUDGET_EXCEEDED = 3,
  WP_STATUS_BAD_INPUT = 4,
  WP_STATUS_NULL_ARGUMENT = 5,
  WP_STATUS_PANIC = 6,
} WpStatus;

typedef enum WpModel {
  WP_MODEL_FULL = 0,
  WP_MODEL_PRA = 1,
  WP_MODEL_NPA = 2,
} WpModel;

// A validated instance.
typedef struct WpInstance WpInstance;

typedef struct WpSolution WpSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next call on the same thread.
const char *wp_last_error(void);

// Library version as a static string.
const char *wp_version(void);

// # Safety
// `s` must be null or a string returned by this library.
void wp_string_free(char *s);

// Parses and validates an instance.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum WpStatus wp_instance_from_json(const char *json, struct WpInstance **out);

// Generates an instance from a named preset.
//
// # Safety
// `preset` must be a nul-terminated string and `out` a valid pointer.
enum WpStatus wp_instance_generate(const char *preset,
                                   uint32_t weeks,
                                   uint64_t seed,
                                   struct WpInstance **out);

// # Safety
// `inst` must be a valid handle and `out` a valid pointer.
enum WpStatus wp_instance_to_json(const struct WpInstance *inst, char **out);

// Number of patients, rooms, nurses and days, written to `counts[0..4]`.
//
// # Safety
// `inst` must be a valid handle and `counts` point to four `uint64_t`.
enum WpStatus wp_instance_sizes(const struct WpInstance *inst, uint64_t *counts);

// # Safety
// `inst` must be null or a handle from this library, freed at most once.
void wp_instance_free(struct WpInstance *inst);

// Greedy construction. `max_triples` of 0 keeps every nurse triple.
//
// # Safety
// `inst` must be a valid handle and `out` a valid pointer.
enum WpStatus wp_solve_heuristic(const struct WpInstance *inst,
                                 uint32_t max_triples,
                                 struct WpSolution **out);

// Exhaustive search, for tiny instances only.
//
// # Safety
// `inst` must be a valid handle and `out` a valid pointer.
enum WpStatus wp_solve_oracle(const struct WpInstance *inst,
                              uint64_t max_nodes,
                              struct WpSolution **out);

// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum WpStatus wp_solution_from_json(const char *json, struct WpSolution **out);

// # Safety
// `sol` must be a valid handle and `out` a valid pointer.
enum WpStatus wp_solution_to_json(const struct WpSolution *sol, char **out);

// # Safety
// `sol` must be null or a handle from this library, freed at most once.
void wp_solution_free(struct WpSolution *sol);

// Checks hard constraints and scores the solution. `weighted_total` and
// `breakdown_json` may each be null. An infeasible solution yields
// [`WpStatus::Infeasible`] and the violation list as the error message.
//
// # Safety
// Handles must be valid; non-null out pointers must be writable.
enum WpStatus wp_evaluate(const struct WpInstance *inst,
                          const struct WpSolution *sol,
                          double *weighted_total,
                          char **breakdown_json);

// Writes a linear model in LP text format. `rooms` supplies the fixed room
// plan for [`WpModel::Npa`] and is ignored otherwise.
//
// # Safety
// `inst` must be a valid handle, `rooms` null or a valid handle, `out` a
// valid pointer.
enum WpStatus wp_export_lp(const struct WpInstance *inst,
                           enum WpModel model,
                           const struct WpSolution *rooms,
                           char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WARDPLAN_H */
