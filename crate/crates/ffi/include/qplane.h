#ifndef QPLANE_H
#define QPLANE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum QpStatus {
  QP_STATUS_OK = 0,
  QP_STATUS_NULL_POINTER = 1,
  QP_STATUS_INVALID_UTF8 = 2,
  QP_STATUS_SYNTAX = 3,
  QP_STATUS_BACKEND_MISMATCH = 4,
  QP_STATUS_ZERO_DEFORMATION = 5,
  QP_STATUS_DEFORMATION_MISMATCH = 6,
  QP_STATUS_WEIGHT_SPEC = 7,
  QP_STATUS_WEIGHT_OUT_OF_RANGE = 8,
  QP_STATUS_POSITIVITY_VIOLATION = 9,
  QP_STATUS_DOMAIN = 10,
  QP_STATUS_DIMENSION_MISMATCH = 11,
  QP_STATUS_WEIGHTS_MISMATCH = 12,
  QP_STATUS_IO = 13,
  QP_STATUS_JSON = 14,
  QP_STATUS_PANIC = 15,
} QpStatus;

// Polynomial in `t`, `tb` with exact coefficients.
typedef struct QpElement QpElement;

// Truncated operator in the monomial basis.
typedef struct QpOperator QpOperator;

// Weight sequence `w_0, w_1, …`.
typedef struct QpWeights QpWeights;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call into the library from the same thread.
const char *qp_last_error_message(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void qp_string_free(char *s);

// Parses `text` with deformation parameter `q` (rational, e.g. `"3/4"`).
//
// # Safety
// `text` and `q` must be NUL-terminated; `out` must be writable.
enum QpStatus qp_element_parse(const char *text, const char *q, struct QpElement **out);

// # Safety
// `json` must be NUL-terminated; `out` must be writable.
enum QpStatus qp_element_from_json(const char *json, struct QpElement **out);

// # Safety
// Handles must be live; `out` must be writable.
enum QpStatus qp_element_mul(const struct QpElement *a,
                             const struct QpElement *b,
                             struct QpElement **out);

// # Safety
// Handles must be live; `out` must be writable.
enum QpStatus qp_element_add(const struct QpElement *a,
                             const struct QpElement *b,
                             struct QpElement **out);

// # Safety
// `a` must be live; `out` must be writable.
enum QpStatus qp_element_star(const struct QpElement *a, struct QpElement **out);

// Writes 1 to `out` if the elements are equal (same q and terms), else 0.
//
// # Safety
// Handles must be live; `out` must be writable.
enum QpStatus qp_element_equal(const struct QpElement *a, const struct QpElement *b, int32_t *out);

// Text form, reparsable by [`qp_element_parse`].
//
// # Safety
// `a` must be live; `out` must be writable.
enum QpStatus qp_element_to_string(const struct QpElement *a, char **out);

// # Safety
// `a` must be live; `out` must be writable.
enum QpStatus qp_element_to_json(const struct QpElement *a, char **out);

// # Safety
// `a` must be null or a live handle; it is invalid afterwards.
void qp_element_free(struct QpElement *a);

// Accepts `factorial`, `constant:<c>`, `qfactorial:q=<r>:w0=<r>` and
// `table:<path or JSON array>[:repeat-last]`.
//
// # Safety
// `spec` must be NUL-terminated; `out` must be writable.
enum QpStatus qp_weights_parse(const char *spec, struct QpWeights **out);

// # Safety
// `w` must be null or a live handle; it is invalid afterwards.
void qp_weights_free(struct QpWeights *w);

// `⟨f, g⟩_w`, anti-linear in `f`, rendered as text (e.g. `"3/4"`, `"(1-2i)"`).
//
// # Safety
// Handles must be live; `out` must be writable.
enum QpStatus qp_inner(const struct QpElement *f,
                       const struct QpElement *g,
                       const struct QpWeights *w,
                       char **out);

// Projection onto holomorphic polynomials.
//
// # Safety
// Handles must be live; `out` must be writable.
enum QpStatus qp_project(const struct QpElement *f,
                         const struct QpWeights *w,
                         struct QpElement **out);

// Truncated Toeplitz operator with symbol `g` on `span{φ_0, …, φ_{dim−1}}`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum QpStatus qp_toeplitz(const struct QpElement *g,
                          const struct QpWeights *w,
                          size_t dim,
                          struct QpOperator **out);

// # Safety
// Handles must be live; `out` must be writable.
enum QpStatus qp_operator_compose(const struct QpOperator *a,
                                  const struct QpOperator *b,
                                  struct QpOperator **out);

// # Safety
// `a` must be live; `out` must be writable.
enum QpStatus qp_operator_adjoint(const struct QpOperator *a, struct QpOperator **out);

// # Safety
// `a` must be live; `out` must be writable.
enum QpStatus qp_operator_dim(const struct QpOperator *a, size_t *out);

// Number of leading columns unaffected by truncation.
//
// # Safety
// `a` must be live; `out` must be writable.
enum QpStatus qp_operator_interior_columns(const struct QpOperator *a, size_t *out);

// `⟨φ_row, T φ_col⟩` in double precision.
//
// # Safety
// `a` must be live; `re` and `im` must be writable.
enum QpStatus qp_operator_phi_entry(const struct QpOperator *a,
                                    size_t row,
                                    size_t col,
                                    double *re,
                                    double *im);

// Exact entry as `coeff` and `radicand` strings, meaning `coeff·√radicand`.
//
// # Safety
// `a` must be live; `coeff` and `radicand` must be writable.
enum QpStatus qp_operator_phi_entry_exact(const struct QpOperator *a,
                                          size_t row,
                                          size_t col,
                                          char **coeff,
                                          char **radicand);

// # Safety
// `a` must be live; `out` must be writable.
enum QpStatus qp_operator_to_json(const struct QpOperator *a, char **out);

// # Safety
// `a` must be null or a live handle; it is invalid afterwards.
void qp_operator_free(struct QpOperator *a);

// Residual of `[T_tb, T_t]_{1/q} = I` under the weights `[k]!_{1/q}·w0`,
// rendered as text; `"0"` when the relation holds exactly.
//
// # Safety
// `q` and `w0` must be NUL-terminated; `out` must be writable.
enum QpStatus qp_ccr_residual(const char *q, const char *w0, size_t dim, char **out);

// Hankel rank scan, as the same JSON report the command line prints.
//
// # Safety
// `w` must be live; `out` must be writable.
enum QpStatus qp_degeneracy_json(const struct QpWeights *w,
                                 uint32_t m_max,
                                 uint32_t r_max,
                                 uint32_t s_max,
                                 char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPLANE_H */
