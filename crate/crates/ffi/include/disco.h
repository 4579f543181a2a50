#ifndef DISCO_H
#define DISCO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DiscoStatus {
  DISCO_STATUS_OK = 0,
  DISCO_STATUS_NULL_POINTER = 1,
  DISCO_STATUS_DOMAIN = 2,
  DISCO_STATUS_SHAPE = 3,
  DISCO_STATUS_CAPACITY = 4,
  DISCO_STATUS_USAGE = 5,
  DISCO_STATUS_UNDEFINED = 6,
  DISCO_STATUS_IO = 7,
  DISCO_STATUS_PANIC = 8,
} DiscoStatus;

typedef enum DiscoMeasure {
  DISCO_MEASURE_STAR_L2 = 0,
  DISCO_MEASURE_L2 = 1,
  DISCO_MEASURE_MODIFIED = 2,
  DISCO_MEASURE_CENTERED = 3,
  DISCO_MEASURE_SYMMETRIC = 4,
  DISCO_MEASURE_WRAPAROUND = 5,
  DISCO_MEASURE_ERSATZ = 6,
} DiscoMeasure;

/**
 * Row-major matrix of doubles.
 */
typedef struct DiscoMatrix DiscoMatrix;

/**
 * Randomized test function.
 */
typedef struct DiscoMetaFunction DiscoMetaFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *disco_last_error(void);

/**
 * Copies `rows * cols` row-major values into a new matrix.
 *
 * # Safety
 * `data` must point to `rows * cols` readable doubles; `out_matrix` must be writable.
 */
enum DiscoStatus disco_matrix_new(const double *data,
                                  size_t rows,
                                  size_t cols,
                                  struct DiscoMatrix **out_matrix);

/**
 * Draws `n` points in `[0, 1)^d`: random when `sobol == 0`, otherwise
 * Sobol' (Owen-scrambled when `scramble != 0`).
 *
 * # Safety
 * `out_matrix` must be writable.
 */
enum DiscoStatus disco_sample(int32_t sobol,
                              int32_t scramble,
                              uint64_t seed,
                              size_t n,
                              size_t d,
                              struct DiscoMatrix **out_matrix);

/**
 * # Safety
 * `m` must be a live matrix handle.
 */
size_t disco_matrix_rows(const struct DiscoMatrix *m);

/**
 * # Safety
 * `m` must be a live matrix handle.
 */
size_t disco_matrix_cols(const struct DiscoMatrix *m);

/**
 * Copies the row-major contents into `dst`, which holds `len` doubles.
 *
 * # Safety
 * `m` must be a live handle and `dst` must hold `len` writable doubles.
 */
enum DiscoStatus disco_matrix_copy(const struct DiscoMatrix *m, double *dst, size_t len);

/**
 * # Safety
 * `m` must be NULL or a handle not yet freed.
 */
void disco_matrix_free(struct DiscoMatrix *m);

/**
 * Squared discrepancy of the point set (S-ersatz for two columns).
 *
 * # Safety
 * `m` must be a live handle; `out_value` must be writable.
 */
enum DiscoStatus disco_discrepancy(const struct DiscoMatrix *m,
                                   enum DiscoMeasure measure,
                                   double *out_value);

/**
 * S-ersatz of the scatter `(x_i, y_i)`.
 *
 * # Safety
 * `x` and `y` must each hold `n` doubles; `out_value` must be writable.
 */
enum DiscoStatus disco_s_ersatz(const double *x, const double *y, size_t n, double *out_value);

/**
 * Per-input importance scores (larger = more influential) from unit-cube
 * inputs and their outputs. `scores` receives `cols` values.
 *
 * # Safety
 * `inputs` must be a live handle, `y` must hold `rows` doubles and `scores`
 * must hold `cols` writable doubles.
 */
enum DiscoStatus disco_importance(const struct DiscoMatrix *inputs,
                                  const double *y,
                                  enum DiscoMeasure measure,
                                  double *scores);

/**
 * Jansen total-order indices from outputs laid out as `A, A_B1, .., A_Bd`
 * (`n_base * (d + 1)` values). `t` receives `d` values.
 *
 * # Safety
 * `y` must hold `n_base * (d + 1)` doubles and `t` must hold `d`.
 */
enum DiscoStatus disco_jansen(const double *y, size_t n_base, size_t d, double *t);

/**
 * Savage scores of `values`; the largest value ranks first when
 * `larger_is_first != 0`.
 *
 * # Safety
 * `values` and `scores` must each hold `n` doubles.
 */
enum DiscoStatus disco_savage_scores(const double *values,
                                     size_t n,
                                     int32_t larger_is_first,
                                     double *scores);

/**
 * # Safety
 * `out_fn` must be writable.
 */
enum DiscoStatus disco_metafunction_build(size_t d,
                                          uint64_t seed,
                                          struct DiscoMetaFunction **out_fn);

/**
 * Parses a function previously exported with [`disco_metafunction_to_json`].
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_fn` must be writable.
 */
enum DiscoStatus disco_metafunction_from_json(const char *json, struct DiscoMetaFunction **out_fn);

/**
 * Evaluates every row of `inputs`; `y` receives one value per row.
 *
 * # Safety
 * Both handles must be live; `y` must hold `rows` writable doubles.
 */
enum DiscoStatus disco_metafunction_eval(const struct DiscoMetaFunction *f,
                                         const struct DiscoMatrix *inputs,
                                         double *y);

/**
 * JSON description of the function; release with [`disco_string_free`].
 *
 * # Safety
 * `f` must be a live handle; `out_json` must be writable.
 */
enum DiscoStatus disco_metafunction_to_json(const struct DiscoMetaFunction *f, char **out_json);

/**
 * # Safety
 * `f` must be NULL or a handle not yet freed.
 */
void disco_metafunction_free(struct DiscoMetaFunction *f);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void disco_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISCO_H */
