/* SPDX-License-Identifier: Apache-2.0 */

#ifndef EAPMS_H
#define EAPMS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum EapmsStatus {
  EAPMS_STATUS_OK = 0,
  EAPMS_STATUS_NULL_POINTER = 1,
  EAPMS_STATUS_INVALID_UTF8 = 2,
  EAPMS_STATUS_PARSE = 3,
  EAPMS_STATUS_VALIDATION = 4,
  EAPMS_STATUS_CONTRACT = 5,
  EAPMS_STATUS_BUDGET = 6,
  EAPMS_STATUS_INFEASIBLE = 7,
  EAPMS_STATUS_DEGENERATE = 8,
  EAPMS_STATUS_INTERNAL = 9,
  EAPMS_STATUS_PANIC = 10,
} EapmsStatus;

typedef enum EapmsMethod {
  EAPMS_METHOD_TTB = 0,
  EAPMS_METHOD_TMS = 1,
  EAPMS_METHOD_ORACLE = 2,
  EAPMS_METHOD_MIN_ENERGY = 3,
} EapmsMethod;

/**
 * Opaque validated problem instance.
 */
typedef struct EapmsInstance EapmsInstance;

/**
 * Opaque solution report.
 */
typedef struct EapmsReport EapmsReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *eapms_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *eapms_version(void);

/**
 * Parses an instance from a JSON document (same format as instance files).
 */
enum EapmsStatus eapms_instance_from_json(const char *json, struct EapmsInstance **out);

/**
 * Builds an instance from flat arrays.
 *
 * `task_counts` has `task_types` entries, `machine_counts` has
 * `machine_types` entries, and `etc`/`apc` are row-major
 * `task_types x machine_types` matrices.
 */
enum EapmsStatus eapms_instance_new(size_t task_types,
                                    size_t machine_types,
                                    const uint64_t *task_counts,
                                    const uint64_t *machine_counts,
                                    const double *etc,
                                    const double *apc,
                                    double price,
                                    double energy_cost,
                                    struct EapmsInstance **out);

/**
 * Copy of `inst` priced at `gamma * E_min`.
 */
enum EapmsStatus eapms_instance_with_gamma(const struct EapmsInstance *inst,
                                           double gamma,
                                           struct EapmsInstance **out);

/**
 * Minimum total energy ignoring makespan, or NaN for a null handle.
 */
double eapms_instance_e_min(const struct EapmsInstance *inst);

/**
 * Serializes `inst` to JSON. Release the string with [`eapms_string_free`].
 */
enum EapmsStatus eapms_instance_to_json(const struct EapmsInstance *inst, char **out);

void eapms_string_free(char *s);

void eapms_instance_free(struct EapmsInstance *inst);

/**
 * Task-type-based sweep with approximation parameter `epsilon`.
 */
enum EapmsStatus eapms_solve_ttb(const struct EapmsInstance *inst,
                                 double epsilon,
                                 struct EapmsReport **out);

/**
 * TMS baseline (reconstructed rounding).
 */
enum EapmsStatus eapms_solve_tms(const struct EapmsInstance *inst, struct EapmsReport **out);

/**
 * Exact optimum by enumeration; fails with `Budget` past `max_states` nodes.
 */
enum EapmsStatus eapms_solve_oracle(const struct EapmsInstance *inst,
                                    uint64_t max_states,
                                    struct EapmsReport **out);

void eapms_report_free(struct EapmsReport *report);

double eapms_report_makespan(const struct EapmsReport *report);

double eapms_report_energy(const struct EapmsReport *report);

double eapms_report_profit_rate(const struct EapmsReport *report);

/**
 * Writes the makespan target that produced the schedule; returns false when
 * the method has none (TMS, oracle) or the handle is null.
 */
bool eapms_report_ms_candidate(const struct EapmsReport *report, double *out);

enum EapmsStatus eapms_report_method(const struct EapmsReport *report, enum EapmsMethod *out);

/**
 * Copies the task counts of machine `k` of type `j` into `counts`
 * (`len` must equal the number of task types).
 */
enum EapmsStatus eapms_report_machine_tasks(const struct EapmsReport *report,
                                            size_t machine_type,
                                            size_t machine,
                                            uint64_t *counts,
                                            size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EAPMS_H */
