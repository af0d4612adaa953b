#ifndef PERMLOGIC_H
#define PERMLOGIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The first four match the command-line exit codes.
 */
typedef enum PlStatus {
  /**
   * Positive verdict or plain success.
   */
  PL_STATUS_OK = 0,
  /**
   * Negative verdict within the given bounds.
   */
  PL_STATUS_NEGATIVE = 1,
  /**
   * Malformed input or violated precondition.
   */
  PL_STATUS_INPUT_ERROR = 2,
  /**
   * A time budget ran out.
   */
  PL_STATUS_BUDGET = 3,
  /**
   * A required pointer argument was null.
   */
  PL_STATUS_NULL_POINTER = 4,
  /**
   * Unexpected failure inside the library.
   */
  PL_STATUS_INTERNAL = 5,
} PlStatus;

typedef struct PlFormula PlFormula;

typedef struct PlModel PlModel;

typedef struct PlRlpInstance PlRlpInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *pl_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void pl_string_free(char *s);

/**
 * Parse a closed formula.
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out` must be writable.
 */
enum PlStatus pl_formula_parse(const char *src, struct PlFormula **out);

/**
 * # Safety
 * `f` must come from `pl_formula_parse` or be null.
 */
void pl_formula_free(struct PlFormula *f);

/**
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum PlStatus pl_formula_to_string(const struct PlFormula *f, char **out);

/**
 * Normal form of `f` as text, one matrix per line.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum PlStatus pl_formula_snf(const struct PlFormula *f, char **out);

/**
 * Parse a model in the `.pm` format.
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out` must be writable.
 */
enum PlStatus pl_model_parse(const char *src, struct PlModel **out);

/**
 * # Safety
 * `m` must come from this library or be null.
 */
void pl_model_free(struct PlModel *m);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `m` must be a live handle or null.
 */
size_t pl_model_size(const struct PlModel *m);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum PlStatus pl_model_to_string(const struct PlModel *m, char **out);

/**
 * `PL_STATUS_OK` if the model satisfies the formula, `PL_STATUS_NEGATIVE` if not.
 *
 * # Safety
 * Both handles must be live.
 */
enum PlStatus pl_check(const struct PlModel *m, const struct PlFormula *f);

/**
 * Bounded satisfiability. On `PL_STATUS_OK` a verified model is stored in
 * `out`; on `PL_STATUS_NEGATIVE` there is no model within the bounds.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum PlStatus pl_sat(const struct PlFormula *f,
                     size_t max_fingerprints,
                     size_t block_len,
                     size_t max_size,
                     struct PlModel **out);

/**
 * Parse an instance in the `.rlp` format.
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out` must be writable.
 */
enum PlStatus pl_rlp_parse(const char *src, struct PlRlpInstance **out);

/**
 * # Safety
 * `i` must come from `pl_rlp_parse` or be null.
 */
void pl_rlp_free(struct PlRlpInstance *i);

/**
 * Search for a witness; it is returned as a model whose elements each
 * carry exactly their label. `theta` 0 selects the default threshold.
 *
 * # Safety
 * `i` must be a live handle; `out` must be writable.
 */
enum PlStatus pl_rlp_solve(const struct PlRlpInstance *i, size_t theta, struct PlModel **out);

/**
 * `PL_STATUS_OK` if the model is a witness for the instance.
 *
 * # Safety
 * Both handles must be live.
 */
enum PlStatus pl_rlp_verify(const struct PlRlpInstance *i, const struct PlModel *w);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERMLOGIC_H */
