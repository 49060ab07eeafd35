#ifndef NBQI_H
#define NBQI_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NbqiBoxMesh {
  NBQI_BOX_MESH_THREE_DIRECTION = 0,
  NBQI_BOX_MESH_FOUR_DIRECTION = 1,
} NbqiBoxMesh;

typedef enum NbqiCardinalKind {
  NBQI_CARDINAL_KIND_DISCRETE = 0,
  NBQI_CARDINAL_KIND_INTEGRAL = 1,
} NbqiCardinalKind;

typedef enum NbqiStatus {
  NBQI_STATUS_OK = 0,
  NBQI_STATUS_NULL_POINTER = 1,
  NBQI_STATUS_INVALID_ARGUMENT = 2,
  NBQI_STATUS_INVALID_KNOTS = 3,
  NBQI_STATUS_OUT_OF_RANGE = 4,
  NBQI_STATUS_UNSUPPORTED = 5,
  NBQI_STATUS_INADMISSIBLE = 6,
  NBQI_STATUS_NUMERICAL = 7,
  NBQI_STATUS_NOT_DISCRETE = 8,
  NBQI_STATUS_BUFFER_TOO_SMALL = 9,
  NBQI_STATUS_PANIC = 10,
} NbqiStatus;

// Knot sequence handle.
typedef struct NbqiKnots NbqiKnots;

// Quasi-interpolant handle.
typedef struct NbqiOperator NbqiOperator;

// Quadrature rule handle.
typedef struct NbqiQuadrature NbqiQuadrature;

// Real function passed from C; `user` is handed back unchanged.
typedef double (*NbqiFunction)(double x, void *user);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until
// the next call into the library from the same thread.
const char *nbqi_last_error(void);

// Static version string.
const char *nbqi_version(void);

// Clamped knots of degree `m` over `n` strictly increasing breakpoints.
//
// # Safety
// `breaks` must point to `n` readable doubles; `out` must be writable.
enum NbqiStatus nbqi_knots_clamped(size_t m,
                                   const double *breaks,
                                   size_t n,
                                   struct NbqiKnots **out);

// Open knot layout emulating the bi-infinite uniform grid of step `h`.
//
// # Safety
// `out` must be writable.
enum NbqiStatus nbqi_knots_uniform(size_t m, size_t spans, double h, struct NbqiKnots **out);

// Number of B-splines.
//
// # Safety
// `knots` must be a live handle or NULL (returns 0).
size_t nbqi_knots_len(const struct NbqiKnots *knots);

// # Safety
// `knots` must come from this library and not be freed twice.
void nbqi_knots_free(struct NbqiKnots *knots);

// Builds a family (`schoenberg`, `s2`, `gs1`, `gs2`, `qstar`, `nearbest`)
// on `knots`. `p` and `q` are used by `qstar` and `nearbest` only.
//
// # Safety
// `knots` must be a live handle, `family` a NUL-terminated string and
// `out` writable.
enum NbqiStatus nbqi_operator_new(const struct NbqiKnots *knots,
                                  const char *family,
                                  size_t p,
                                  size_t q,
                                  struct NbqiOperator **out);

// Cardinal near-best operator of the given spline `order` (even),
// stencil half-width `n` and exactness degree `r`.
//
// # Safety
// `out` must be writable.
enum NbqiStatus nbqi_operator_cardinal(enum NbqiCardinalKind kind,
                                       size_t order,
                                       size_t n,
                                       size_t r,
                                       struct NbqiOperator **out);

// # Safety
// `op` must come from this library and not be freed twice.
void nbqi_operator_free(struct NbqiOperator *op);

// Number of coefficient functionals.
//
// # Safety
// `op` must be a live handle or NULL (returns 0).
size_t nbqi_operator_len(const struct NbqiOperator *op);

// Largest functional norm, an upper bound for the operator norm.
//
// # Safety
// `op` must be a live handle and `out` writable.
enum NbqiStatus nbqi_operator_nu_bound(const struct NbqiOperator *op, double *out);

// Claimed polynomial exactness degree.
//
// # Safety
// `op` must be a live handle and `out` writable.
enum NbqiStatus nbqi_operator_degree(const struct NbqiOperator *op, size_t *out);

// Writes the `nbqi_operator_len` spline coefficients of `Qf` into `coeffs`.
//
// # Safety
// `op` must be a live handle, `f` callable with `user`, and `coeffs`
// writable for `cap` doubles.
enum NbqiStatus nbqi_operator_coefficients(const struct NbqiOperator *op,
                                           NbqiFunction f,
                                           void *user,
                                           double *coeffs,
                                           size_t cap);

// `(Qf)(x)`.
//
// # Safety
// `op` must be a live handle, `f` callable with `user`, `out` writable.
enum NbqiStatus nbqi_operator_eval(const struct NbqiOperator *op,
                                   NbqiFunction f,
                                   void *user,
                                   double x,
                                   double *out);

// Sampled operator norm; `samples_per_span = 0` selects the default.
//
// # Safety
// `op` must be a live handle and `out` writable.
enum NbqiStatus nbqi_operator_norm(const struct NbqiOperator *op,
                                   size_t samples_per_span,
                                   double *out);

// Quadrature rule `∫Qf` of a discrete operator.
//
// # Safety
// `op` must be a live handle and `out` writable.
enum NbqiStatus nbqi_quadrature_new(const struct NbqiOperator *op, struct NbqiQuadrature **out);

// # Safety
// `rule` must be a live handle or NULL (returns 0).
size_t nbqi_quadrature_len(const struct NbqiQuadrature *rule);

// Copies nodes and weights; either pointer may be NULL to skip it.
//
// # Safety
// `rule` must be a live handle; non-NULL buffers must hold `cap` doubles.
enum NbqiStatus nbqi_quadrature_get(const struct NbqiQuadrature *rule,
                                    double *nodes,
                                    double *weights,
                                    size_t cap);

// Applies the rule to `f`.
//
// # Safety
// `rule` must be a live handle, `f` callable with `user`, `out` writable.
enum NbqiStatus nbqi_quadrature_apply(const struct NbqiQuadrature *rule,
                                      NbqiFunction f,
                                      void *user,
                                      double *out);

// # Safety
// `rule` must come from this library and not be freed twice.
void nbqi_quadrature_free(struct NbqiQuadrature *rule);

// Near-best box-spline stencil at scale `s`: centre weight, common vertex
// weight and the bound `ν`.
//
// # Safety
// All out pointers must be writable.
enum NbqiStatus nbqi_box_stencil(enum NbqiBoxMesh mesh,
                                 size_t s,
                                 double *center,
                                 double *vertex,
                                 double *nu);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NBQI_H */
