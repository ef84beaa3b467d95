#ifndef QREES_H
#define QREES_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; values 2 to 6 match the command line exit codes.
 */
typedef enum QreesStatus {
  QREES_STATUS_OK = 0,
  QREES_STATUS_PARSE_ERROR = 2,
  QREES_STATUS_UNSUPPORTED_CHARACTERISTIC = 3,
  QREES_STATUS_CHART_SPLIT_REQUIRED = 4,
  QREES_STATUS_NOT_TERMINATED = 5,
  QREES_STATUS_PRECONDITION_VIOLATED = 6,
  QREES_STATUS_NULL_ARGUMENT = 7,
  QREES_STATUS_INVALID_UTF8 = 8,
} QreesStatus;

/**
 * A parsed problem file. Opaque to C.
 */
typedef struct QreesProblem QreesProblem;

/**
 * Command flags. String fields may be null; `cap` null means the default.
 */
typedef struct QreesOptions {
  bool json;
  bool dot;
  uint32_t n_max;
  uintptr_t max_steps;
  const char *cap;
  const char *point;
  const char *var;
  const char *center;
  const char *chart_var;
  const char *algebra;
  const char *poly;
  const char *weight;
} QreesOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default flags: text output, `n_max` 4, 50 resolution steps.
 */
struct QreesOptions qrees_options_default(void);

/**
 * Parses a problem file. On success `*out` receives a handle to release
 * with [`qrees_problem_free`].
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` is a valid pointer.
 */
enum QreesStatus qrees_problem_parse(const char *text, struct QreesProblem **out);

/**
 * Releases a handle from [`qrees_problem_parse`]. Null is ignored.
 *
 * # Safety
 * `problem` is null or a live handle not yet freed.
 */
void qrees_problem_free(struct QreesProblem *problem);

/**
 * Runs a command (`diff`, `sing`, `ord`, ..., `resolve`). The rendered
 * output goes to `*out` whenever the status is `Ok` or `NotTerminated`.
 *
 * # Safety
 * `problem` is a live handle, `command` a NUL-terminated string, `options`
 * null or valid with valid string fields, and `out` a valid pointer.
 */
enum QreesStatus qrees_run(const struct QreesProblem *problem,
                           const char *command,
                           const struct QreesOptions *options,
                           char **out);

/**
 * Shorthand for `resolve` with JSON output and the given step budget.
 *
 * # Safety
 * `problem` is a live handle and `out` a valid pointer.
 */
enum QreesStatus qrees_resolve_json(const struct QreesProblem *problem,
                                    uintptr_t max_steps,
                                    char **out);

/**
 * Message for the last failure on this thread, or null. Release with
 * [`qrees_string_free`].
 */
char *qrees_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or a string from this library not yet freed.
 */
void qrees_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QREES_H */
