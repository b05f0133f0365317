#ifndef NCRIT_H
#define NCRIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NcritStatus {
  NCRIT_STATUS_OK = 0,
  NCRIT_STATUS_NULL_ARGUMENT = 1,
  NCRIT_STATUS_INVALID_UTF8 = 2,
  NCRIT_STATUS_PARSE_ERROR = 3,
  NCRIT_STATUS_INVALID_ARGUMENT = 4,
  NCRIT_STATUS_INFEASIBLE = 5,
  NCRIT_STATUS_PANIC = 6,
} NcritStatus;

typedef enum NcritVerdict {
  NCRIT_VERDICT_ZERO = 0,
  NCRIT_VERDICT_NONZERO = 1,
  NCRIT_VERDICT_LIKELY_ZERO = 2,
} NcritVerdict;

// A parsed rational formula.
typedef struct NcritFormula NcritFormula;

// The outcome of a test: verdict plus the full JSON report.
typedef struct NcritReport NcritReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message on this thread, or NULL. Owned by the library.
const char *ncrit_last_error(void);

void ncrit_clear_error(void);

// Parse formula text (NUL-terminated UTF-8) into `*out_formula`.
//
// # Safety
// `text` must be a valid C string; `out_formula` must be writable.
enum NcritStatus ncrit_formula_parse(const char *text, struct NcritFormula **out_formula);

// # Safety
// `f` must come from `ncrit_formula_parse` and not be freed twice.
void ncrit_formula_free(struct NcritFormula *f);

// Number of variables, size and inversion height.
//
// # Safety
// `f` must be a live handle; the out pointers must be writable or NULL.
enum NcritStatus ncrit_formula_measures(const struct NcritFormula *f,
                                        size_t *nvars,
                                        size_t *size,
                                        size_t *height);

// Deterministic test against the desk-parameter hitting set. `height` < 0
// selects the formula's own inversion height.
//
// # Safety
// `f` must be a live handle; `out_report` must be writable.
enum NcritStatus ncrit_test_hitset(const struct NcritFormula *f,
                                   int32_t height,
                                   struct NcritReport **out_report);

// Randomized test: `trials` points per dimension 1..=max_dim.
//
// # Safety
// `f` must be a live handle; `out_report` must be writable.
enum NcritStatus ncrit_test_random(const struct NcritFormula *f,
                                   size_t max_dim,
                                   size_t trials,
                                   uint64_t seed,
                                   struct NcritReport **out_report);

// # Safety
// `r` must be a live report.
enum NcritStatus ncrit_report_verdict(const struct NcritReport *r, enum NcritVerdict *verdict);

// JSON form of the report, to be released with `ncrit_string_free`.
//
// # Safety
// `r` must be a live report; `json` must be writable.
enum NcritStatus ncrit_report_json(const struct NcritReport *r, char **json);

// # Safety
// `r` must come from a test call and not be freed twice.
void ncrit_report_free(struct NcritReport *r);

// Evaluate at `count` integer matrices of size dim×dim given row-major,
// back to back. Writes `{"result":"VALUE","value":…}` or
// `{"result":"NOT_DEFINED","path":…}` to `*json`.
//
// # Safety
// `entries` must hold count·dim·dim values; `json` must be writable.
enum NcritStatus ncrit_eval_int(const struct NcritFormula *f,
                                size_t count,
                                size_t dim,
                                const int64_t *entries,
                                char **json);

// # Safety
// `s` must come from this library and not be freed twice.
void ncrit_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NCRIT_H */
