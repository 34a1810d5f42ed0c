#ifndef WRAPFREE_H
#define WRAPFREE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum WfStatus {
  WF_STATUS_OK = 0,
  WF_STATUS_NULL_POINTER = 1,
  WF_STATUS_INVALID_ARGUMENT = 2,
  WF_STATUS_NO_CONVERGENCE = 3,
  WF_STATUS_LEFT_DOMAIN = 4,
  WF_STATUS_FIXED_POINT_STALL = 5,
  WF_STATUS_NUMERIC = 6,
  WF_STATUS_PANIC = 7,
  WF_STATUS_BUFFER_TOO_SMALL = 8,
} WfStatus;

/**
 * A Boolean infinitely divisible descriptor `(gamma, sigma)` on the circle.
 */
typedef struct WfBooleanId WfBooleanId;

/**
 * A finite measure on the unit circle.
 */
typedef struct WfCircleMeasure WfCircleMeasure;

/**
 * A class-L descriptor `(beta, sigma)`.
 */
typedef struct WfClassL WfClassL;

/**
 * An `F`-transform on the upper half-plane or an `eta`-transform on the disk.
 */
typedef struct WfTransform WfTransform;

typedef struct WfComplex {
  double re;
  double im;
} WfComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *wf_version(void);

/**
 * Length in bytes, including the terminating NUL, of the last error message
 * on this thread; 0 when there is none.
 */
size_t wf_last_error_length(void);

/**
 * Copies the last error message of this thread into `buf`.
 *
 * # Safety
 * `buf` must be writable for `cap` bytes.
 */
enum WfStatus wf_last_error_message(char *buf, size_t cap);

/**
 * Builds a circle measure from atoms `(thetas[i], masses[i])` and the density
 * `c0 + 2 Re sum_n cn[n-1] e^{in theta}` with respect to `d theta / 2 pi`.
 *
 * # Safety
 * Arrays must hold the stated number of elements; `result` must be writable.
 */
enum WfStatus wf_circle_measure_new(const double *thetas,
                                    const double *masses,
                                    size_t n_atoms,
                                    double c0,
                                    const struct WfComplex *cn,
                                    size_t n_modes,
                                    struct WfCircleMeasure **result);

/**
 * # Safety
 * `m` must come from this library or be null.
 */
void wf_circle_measure_free(struct WfCircleMeasure *m);

/**
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_circle_measure_total_mass(const struct WfCircleMeasure *m, double *mass);

/**
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_classl_new(double beta,
                            const struct WfCircleMeasure *sigma,
                            struct WfClassL **result);

/**
 * # Safety
 * `d` must come from this library or be null.
 */
void wf_classl_free(struct WfClassL *d);

/**
 * Branch index `n = floor(-beta / 2 pi)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_classl_branch(const struct WfClassL *d, int64_t *branch);

/**
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_boolean_id_new(struct WfComplex gamma,
                                const struct WfCircleMeasure *sigma,
                                struct WfBooleanId **result);

/**
 * # Safety
 * `b` must come from this library or be null.
 */
void wf_boolean_id_free(struct WfBooleanId *b);

/**
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_boolean_id_gamma(const struct WfBooleanId *b, struct WfComplex *gamma);

/**
 * Wrapped descriptor of a class-L measure.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_wrap(const struct WfClassL *d, struct WfBooleanId **result);

/**
 * Class-L descriptor `(-Arg gamma + 2 pi branch, sigma)` that wraps to `b`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_unwrap(const struct WfBooleanId *b, int64_t branch, struct WfClassL **result);

/**
 * `F`-transform of a class-L descriptor.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_classl_transform(const struct WfClassL *d, struct WfTransform **result);

/**
 * `eta`-transform of a Boolean descriptor.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_boolean_id_transform(const struct WfBooleanId *b, struct WfTransform **result);

/**
 * # Safety
 * `t` must come from this library or be null.
 */
void wf_transform_free(struct WfTransform *t);

/**
 * 1 for an `eta`-transform on the disk, 0 for an `F`-transform on the upper half-plane.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_transform_is_eta(const struct WfTransform *t, int32_t *is_eta);

/**
 * Evaluates `F(z)` or `eta(z)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_transform_eval(const struct WfTransform *t,
                                struct WfComplex z,
                                struct WfComplex *value);

/**
 * `F`-transform of the free additive convolution of two line laws.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_free_add(const struct WfTransform *a,
                          const struct WfTransform *b,
                          struct WfTransform **result);

/**
 * Monotone convolution: the composition `a(b(z))` of two transforms of one kind.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_monotone_compose(const struct WfTransform *a,
                                  const struct WfTransform *b,
                                  struct WfTransform **result);

/**
 * Atoms of a class-L law whose sigma is purely atomic, using `window`
 * singularity intervals on each side.
 *
 * `count` receives the number of atoms. When `cap` is smaller, nothing is
 * written to the arrays and `WF_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `xs` and `ws` must be writable for `cap` elements; other pointers must be valid.
 */
enum WfStatus wf_solve_atoms(const struct WfClassL *d,
                             size_t window,
                             double *xs,
                             double *ws,
                             size_t cap,
                             size_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WRAPFREE_H */
