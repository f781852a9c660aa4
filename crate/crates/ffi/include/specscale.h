#ifndef SPECSCALE_H
#define SPECSCALE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpecscaleStatus {
  SPECSCALE_STATUS_OK = 0,
  SPECSCALE_STATUS_NULL_POINTER = 1,
  SPECSCALE_STATUS_INVALID_ARGUMENT = 2,
  SPECSCALE_STATUS_DIMENSION = 3,
  SPECSCALE_STATUS_VALIDATION = 4,
  SPECSCALE_STATUS_PARSE = 5,
  // `det(A1 + λ·A2)` vanishes identically.
  SPECSCALE_STATUS_SINGULAR_PENCIL = 6,
  // `A2 = 0`, so there is no pencil.
  SPECSCALE_STATUS_ZERO_A2 = 7,
  SPECSCALE_STATUS_NO_CONVERGENCE = 8,
  SPECSCALE_STATUS_IO = 9,
  // A Rust panic was caught at the boundary.
  SPECSCALE_STATUS_PANIC = 10,
} SpecscaleStatus;

typedef enum SpecscaleMethod {
  SPECSCALE_METHOD_GENERALIZED_EIG = 0,
  SPECSCALE_METHOD_DET_POLY = 1,
} SpecscaleMethod;

typedef enum SpecscaleSubject {
  SPECSCALE_SUBJECT_THEOREM21 = 0,
  SPECSCALE_SUBJECT_REMARK22 = 1,
  SPECSCALE_SUBJECT_LEMMA23 = 2,
  SPECSCALE_SUBJECT_REMARK24 = 3,
  SPECSCALE_SUBJECT_THEOREM25 = 4,
} SpecscaleSubject;

typedef enum SpecscaleVerdict {
  SPECSCALE_VERDICT_PASSED = 0,
  SPECSCALE_VERDICT_FAILED = 1,
  SPECSCALE_VERDICT_NOT_APPLICABLE = 2,
} SpecscaleVerdict;

typedef struct SpecscaleFaces SpecscaleFaces;

// A validated Hermitian pair `(A1, A2)`.
typedef struct SpecscalePair SpecscalePair;

typedef struct SpecscaleSpectrum SpecscaleSpectrum;

// Exposed face of `B(A)` in direction `u`.
typedef struct SpecscaleFace {
  double base[3];
  double far[3];
  double x_extent;
  size_t kernel_dim;
  size_t dimension;
} SpecscaleFace;

// A face exposed by `(0, t1, t2)` with positive x-extent.
typedef struct SpecscaleHorizontalFace {
  double t1;
  double t2;
  // `+∞` for the vertical direction `(0, 1)`.
  double tan_theta;
  double x_extent;
  size_t kernel_dim;
  // Whether a real pencil root (or `∞`) was matched to this face.
  bool matched;
  // The matched root; NaN when unmatched.
  double root;
} SpecscaleHorizontalFace;

typedef struct SpecscaleVerification {
  enum SpecscaleVerdict verdict;
  double max_residual;
  double tolerance;
} SpecscaleVerification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next call into the library on the same thread.
const char *specscale_last_error(void);

// Library version as a static NUL-terminated string.
const char *specscale_version(void);

// Cartesian pair of a general complex matrix `A = A1 + i·A2`.
//
// # Safety
// `re` (and `im` unless null) must point to `n*n` doubles; `out` must be writable.
enum SpecscaleStatus specscale_pair_from_matrix(size_t n,
                                                const double *re,
                                                const double *im,
                                                struct SpecscalePair **out);

// Pair from Hermitian `A1` and `A2`, checked within `hermit_tol`.
//
// # Safety
// Each non-null array must hold `n*n` doubles; `out` must be writable.
enum SpecscaleStatus specscale_pair_from_hermitian(size_t n,
                                                   const double *a1_re,
                                                   const double *a1_im,
                                                   const double *a2_re,
                                                   const double *a2_im,
                                                   double hermit_tol,
                                                   struct SpecscalePair **out);

// Pair from a JSON matrix file.
//
// # Safety
// `path` must be a NUL-terminated UTF-8 string; `out` must be writable.
enum SpecscaleStatus specscale_pair_from_file(const char *path, struct SpecscalePair **out);

// # Safety
// `pair` must come from a `specscale_pair_*` constructor and not be freed twice.
void specscale_pair_free(struct SpecscalePair *pair);

// Dimension `n`, or 0 for a null handle.
//
// # Safety
// `pair` must be null or a live handle.
size_t specscale_pair_dim(const struct SpecscalePair *pair);

// Support function `h(u)` for a unit vector `u`.
//
// # Safety
// `u` must point to 3 doubles; `pair` and `out` must be valid.
enum SpecscaleStatus specscale_support_value(const struct SpecscalePair *pair,
                                             const double *u,
                                             double *out);

// Face of `B(A)` exposed by the unit vector `u`.
//
// # Safety
// `u` must point to 3 doubles; `pair` and `out` must be valid.
enum SpecscaleStatus specscale_exposed_face(const struct SpecscalePair *pair,
                                            const double *u,
                                            double tol,
                                            struct SpecscaleFace *out);

// Spectrum of `A1 + λ·A2`. A singular pencil is not an error: check
// [`specscale_spectrum_is_regular`].
//
// # Safety
// `pair` and `out` must be valid.
enum SpecscaleStatus specscale_pencil_spectrum(const struct SpecscalePair *pair,
                                               enum SpecscaleMethod method,
                                               double tol,
                                               struct SpecscaleSpectrum **out);

// # Safety
// `spectrum` must be null or a live handle, freed at most once.
void specscale_spectrum_free(struct SpecscaleSpectrum *spectrum);

// # Safety
// `spectrum` must be null or a live handle.
bool specscale_spectrum_is_regular(const struct SpecscaleSpectrum *spectrum);

// # Safety
// `spectrum` must be null or a live handle.
bool specscale_spectrum_has_infinity(const struct SpecscaleSpectrum *spectrum);

// Number of finite eigenvalues, counted with multiplicity.
//
// # Safety
// `spectrum` must be null or a live handle.
size_t specscale_spectrum_finite_count(const struct SpecscaleSpectrum *spectrum);

// Finite eigenvalue `index`, sorted by real then imaginary part.
//
// # Safety
// `spectrum`, `re` and `im` must be valid.
enum SpecscaleStatus specscale_spectrum_finite(const struct SpecscaleSpectrum *spectrum,
                                               size_t index,
                                               double *re,
                                               double *im);

// Number of distinct real eigenvalues.
//
// # Safety
// `spectrum` must be null or a live handle.
size_t specscale_spectrum_real_count(const struct SpecscaleSpectrum *spectrum);

// Copies up to `capacity` real eigenvalues (ascending) into `values`; returns
// the number copied.
//
// # Safety
// `values` must hold `capacity` doubles.
size_t specscale_spectrum_reals(const struct SpecscaleSpectrum *spectrum,
                                double *values,
                                size_t capacity);

// Horizontal faces of `B(A)` matched to the real pencil spectrum. Fails with
// `SPECSCALE_STATUS_SINGULAR_PENCIL` for a singular pencil.
//
// # Safety
// `pair` and `out` must be valid.
enum SpecscaleStatus specscale_horizontal_faces(const struct SpecscalePair *pair,
                                                double tol,
                                                struct SpecscaleFaces **out);

// # Safety
// `faces` must be null or a live handle, freed at most once.
void specscale_faces_free(struct SpecscaleFaces *faces);

// # Safety
// `faces` must be null or a live handle.
size_t specscale_faces_count(const struct SpecscaleFaces *faces);

// True when every face has a root and every real root (and `∞`) has a face.
//
// # Safety
// `faces` must be null or a live handle.
bool specscale_faces_consistent(const struct SpecscaleFaces *faces);

// # Safety
// `faces` and `out` must be valid.
enum SpecscaleStatus specscale_faces_get(const struct SpecscaleFaces *faces,
                                         size_t index,
                                         struct SpecscaleHorizontalFace *out);

// Runs one verification subject on `pair`. `directions` random directions
// (plus the axes) drawn from `seed` feed the support comparisons.
//
// # Safety
// `pair` and `out` must be valid.
enum SpecscaleStatus specscale_verify(const struct SpecscalePair *pair,
                                      enum SpecscaleSubject which,
                                      size_t directions,
                                      size_t grid,
                                      double tol,
                                      uint64_t seed,
                                      struct SpecscaleVerification *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECSCALE_H */
