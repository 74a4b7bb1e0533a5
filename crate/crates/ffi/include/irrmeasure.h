#ifndef IRRMEASURE_H
#define IRRMEASURE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a library call.
 */
typedef enum IrmStatus {
  IRM_STATUS_OK = 0,
  IRM_STATUS_PARSE = 1,
  /**
   * A value exceeded the magnitude cap. Constructors still return the
   * prefix built before the cap was reached.
   */
  IRM_STATUS_MAGNITUDE_OVERFLOW = 2,
  IRM_STATUS_INSUFFICIENT_TERMS = 3,
  IRM_STATUS_INTERVAL_TOO_WIDE = 4,
  IRM_STATUS_INVALID_OMEGA = 5,
  IRM_STATUS_INVALID_BETA = 6,
  IRM_STATUS_BETA_NOT_CERTIFIABLE = 7,
  IRM_STATUS_RATIONAL_VALUE = 8,
  IRM_STATUS_INVALID_ARGUMENT = 9,
  IRM_STATUS_NULL_POINTER = 10,
  IRM_STATUS_INVALID_UTF8 = 11,
  IRM_STATUS_PANIC = 12,
} IrmStatus;

typedef enum IrmMeasureKind {
  IRM_MEASURE_KIND_EXPONENT = 0,
  IRM_MEASURE_KIND_BASE = 1,
} IrmMeasureKind;

/**
 * Magnitude cap, logarithm precision and seed shared by calls.
 */
typedef struct IrmContext IrmContext;

/**
 * A continued-fraction prefix.
 */
typedef struct IrmContinuedFraction IrmContinuedFraction;

/**
 * A tower series with its staircase and partial sums.
 */
typedef struct IrmSondowSeries IrmSondowSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a context. A `cap_bits` or `log_precision_bits` of 0 selects the
 * default; otherwise the cap must be at least 64 bits and the precision at
 * least 32.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum IrmStatus irm_context_new(uint64_t cap_bits,
                               uint32_t log_precision_bits,
                               uint64_t seed,
                               struct IrmContext **out);

/**
 * # Safety
 * `ctx` must be NULL or a pointer returned by [`irm_context_new`] that has
 * not been freed.
 */
void irm_context_free(struct IrmContext *ctx);

/**
 * Expansion prefix of a named target such as `theta2`, `phi`, `L1`,
 * `tau:1/2`, `jarnik:exp:2`, `13/16` or `1.618`, with at most `terms`
 * quotients after `b_0`.
 *
 * On [`IrmStatus::MagnitudeOverflow`] `*out` still receives the prefix
 * built before the cap was reached.
 *
 * # Safety
 * `ctx` must be a live context, `target` a NUL-terminated string and `out`
 * writable.
 */
enum IrmStatus irm_cf_from_target(const struct IrmContext *ctx,
                                  const char *target,
                                  size_t terms,
                                  struct IrmContinuedFraction **out);

/**
 * Reads an expansion from its JSON form `{"b0", "quotients", "tail"}`.
 *
 * # Safety
 * `json_text` must be a NUL-terminated string and `out` writable.
 */
enum IrmStatus irm_cf_from_json(const char *json_text, struct IrmContinuedFraction **out);

/**
 * Number of quotients after `b_0`; 0 for NULL.
 *
 * # Safety
 * `cf` must be NULL or a live handle.
 */
size_t irm_cf_len(const struct IrmContinuedFraction *cf);

/**
 * Decimal text of quotient `index`, where index 0 is `b_0`.
 *
 * # Safety
 * `cf` must be a live handle and `out` writable.
 */
enum IrmStatus irm_cf_quotient(const struct IrmContinuedFraction *cf, size_t index, char **out);

/**
 * # Safety
 * `cf` must be a live handle and `out` writable.
 */
enum IrmStatus irm_cf_to_json(const struct IrmContinuedFraction *cf, char **out);

/**
 * JSON array of `{"n", "p", "q"}` for every convergent of the prefix.
 *
 * # Safety
 * `cf` must be a live handle and `out` writable.
 */
enum IrmStatus irm_cf_convergents_json(const struct IrmContinuedFraction *cf, char **out);

/**
 * # Safety
 * `cf` must be NULL or a live handle; it is invalid afterwards.
 */
void irm_cf_free(struct IrmContinuedFraction *cf);

/**
 * Per-index exponent or base estimates as a JSON document.
 *
 * # Safety
 * `ctx` and `cf` must be live handles and `out` writable.
 */
enum IrmStatus irm_estimate_json(const struct IrmContext *ctx,
                                 const struct IrmContinuedFraction *cf,
                                 enum IrmMeasureKind kind,
                                 char **out);

/**
 * Tower series for `beta`, given as `b/a` or as a decimal, with `n_terms`
 * towers.
 *
 * On [`IrmStatus::MagnitudeOverflow`] `*out` still receives the towers
 * built before the cap was reached.
 *
 * # Safety
 * `ctx` must be a live context, `beta` a NUL-terminated string and `out`
 * writable.
 */
enum IrmStatus irm_sondow_new(const struct IrmContext *ctx,
                              const char *beta,
                              size_t n_terms,
                              struct IrmSondowSeries **out);

/**
 * Number of towers `t_0, t_1, ...` in the series; 0 for NULL.
 *
 * # Safety
 * `series` must be NULL or a live handle.
 */
size_t irm_sondow_tower_count(const struct IrmSondowSeries *series);

/**
 * # Safety
 * `series` must be a live handle and `out` writable.
 */
enum IrmStatus irm_sondow_to_json(const struct IrmSondowSeries *series, char **out);

/**
 * Certified bracket `{"lo", "hi"}` of the series value.
 *
 * # Safety
 * `ctx` and `series` must be live handles and `out` writable.
 */
enum IrmStatus irm_sondow_value_bracket_json(const struct IrmContext *ctx,
                                             const struct IrmSondowSeries *series,
                                             char **out);

/**
 * # Safety
 * `series` must be NULL or a live handle; it is invalid afterwards.
 */
void irm_sondow_free(struct IrmSondowSeries *series);

/**
 * Runs the command-line tool in process. `argv` excludes the program name.
 * The tool's exit code goes to `*exit_code` and its output to the two
 * string out-parameters; the call itself fails only on bad pointers or
 * non-UTF-8 arguments.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings (or be NULL when
 * `argc` is 0) and every out-parameter must be writable.
 */
enum IrmStatus irm_cli_run(const char *const *argv,
                           size_t argc,
                           int32_t *exit_code,
                           char **stdout_text,
                           char **stderr_text);

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next library call on the same thread.
 */
const char *irm_last_error(void);

/**
 * # Safety
 * `text` must be NULL or a string returned by this library that has not
 * been freed.
 */
void irm_string_free(char *text);

/**
 * Library version as a static string.
 */
const char *irm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IRRMEASURE_H */
