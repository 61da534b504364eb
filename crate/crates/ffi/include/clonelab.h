#ifndef CLONELAB_H
#define CLONELAB_H

#pragma once

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum ClStatus {
  CL_STATUS_OK = 0,
  /**
   * Null pointer, bad UTF-8, or an unparsable option string.
   */
  CL_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Rejected by the library (bad table, arity mismatch, ...).
   */
  CL_STATUS_INPUT_ERROR = 2,
  CL_STATUS_CAP_EXCEEDED = 3,
  /**
   * A panic was caught at the boundary.
   */
  CL_STATUS_INTERNAL = 4,
} ClStatus;

/**
 * An arity-bounded clone fragment.
 */
typedef struct ClFragment ClFragment;

/**
 * A finitary operation on a finite universe.
 */
typedef struct ClOperation ClOperation;

/**
 * A finitary relation on a finite universe.
 */
typedef struct ClRelation ClRelation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *cl_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cl_string_free(char *s);

/**
 * Builds an operation of the given arity on `{0..size-1}` from its table
 * (`size^arity` entries, last argument fastest).
 *
 * # Safety
 * `table` must point to `len` bytes; `out` must be writable.
 */
enum ClStatus cl_operation_new(size_t size,
                               size_t arity,
                               const uint8_t *table,
                               size_t len,
                               struct ClOperation **out_op);

/**
 * # Safety
 * `op` must come from [`cl_operation_new`] and not have been freed.
 */
void cl_operation_free(struct ClOperation *op);

/**
 * # Safety
 * `args` must point to `n` bytes.
 */
enum ClStatus cl_operation_apply(const struct ClOperation *op,
                                 const uint8_t *args,
                                 size_t n,
                                 uint8_t *out_value);

/**
 * # Safety
 * Pointers must be valid.
 */
enum ClStatus cl_is_near_unanimity(const struct ClOperation *op, bool *out_bool);

/**
 * Builds a relation from `count` tuples stored back to back in `tuples`
 * (`count * arity` bytes).
 *
 * # Safety
 * `tuples` must point to `count * arity` bytes.
 */
enum ClStatus cl_relation_new(size_t size,
                              size_t arity,
                              const uint8_t *tuples,
                              size_t count,
                              struct ClRelation **out_rel);

/**
 * # Safety
 * `rel` must come from [`cl_relation_new`] and not have been freed.
 */
void cl_relation_free(struct ClRelation *rel);

/**
 * Whether `op` preserves `rel`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum ClStatus cl_preserves(const struct ClOperation *op,
                           const struct ClRelation *rel,
                           bool *out_bool);

/**
 * Generates the arity-`<= arity_bound` part of the clone generated by
 * `n >= 1` operations. `member_cap` of 0 keeps the default cap.
 *
 * # Safety
 * `gens` must point to `n` valid operation handles.
 */
enum ClStatus cl_fragment_generate(const struct ClOperation *const *gens,
                                   size_t n,
                                   size_t arity_bound,
                                   size_t member_cap,
                                   struct ClFragment **out_frag);

/**
 * # Safety
 * `frag` must come from [`cl_fragment_generate`] and not have been freed.
 */
void cl_fragment_free(struct ClFragment *frag);

/**
 * # Safety
 * Pointers must be valid.
 */
enum ClStatus cl_fragment_contains(const struct ClFragment *frag,
                                   const struct ClOperation *op,
                                   bool *out_bool);

/**
 * Number of members of the given arity (0 above the bound).
 *
 * # Safety
 * Pointers must be valid.
 */
enum ClStatus cl_fragment_member_count(const struct ClFragment *frag,
                                       size_t arity,
                                       size_t *out_count);

/**
 * Whether every `lambda`-subset of the domain of `f` is interpolated by a
 * member of `frag`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum ClStatus cl_is_lambda_interpolable(const struct ClOperation *f,
                                        const struct ClFragment *frag,
                                        size_t lambda,
                                        bool *out_bool);

/**
 * Searches a cover certificate. `strategy` is a strategy name such as
 * `"exhaustive"` or `"equalizer-atoms"`. On success `*out_found` is set and,
 * when found, `*out_cover_json` receives the cover as a JSON array of blocks
 * (otherwise null).
 *
 * # Safety
 * Pointers must be valid; `strategy` must be NUL-terminated.
 */
enum ClStatus cl_search_dagger(const struct ClOperation *f,
                               const struct ClFragment *frag,
                               size_t lambda,
                               const char *strategy,
                               bool *out_found,
                               char **out_cover_json);

/**
 * Runs the command line with `argc` arguments (the program name is
 * supplied). Stores the exit code and the stdout document.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings.
 */
enum ClStatus cl_run_cli(const char *const *argv,
                         size_t argc,
                         int32_t *out_code,
                         char **out_stdout);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLONELAB_H */
