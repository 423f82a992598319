#ifndef CYPOL_H
#define CYPOL_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum CypolStatus {
  CYPOL_STATUS_OK = 0,
  CYPOL_STATUS_NULL_POINTER = 1,
  CYPOL_STATUS_INVALID_ARGUMENT = 2,
  CYPOL_STATUS_NOT_NORMALIZED = 3,
  CYPOL_STATUS_ZERO_FIELD = 4,
  CYPOL_STATUS_FORBIDDEN_TRANSFORM = 5,
  CYPOL_STATUS_TRUNCATION_RISK = 6,
  CYPOL_STATUS_NOT_PURE = 7,
  CYPOL_STATUS_BUFFER_TOO_SMALL = 8,
  CYPOL_STATUS_INTERNAL = 9,
} CypolStatus;

typedef enum CypolSymmetryClass {
  CYPOL_SYMMETRY_CLASS_PRESERVES_PLUS = 0,
  CYPOL_SYMMETRY_CLASS_PRESERVES_MINUS = 1,
  CYPOL_SYMMETRY_CLASS_PRESERVES_BOTH = 2,
  CYPOL_SYMMETRY_CLASS_SWAPS_SPHERES = 3,
  CYPOL_SYMMETRY_CLASS_BREAKS = 4,
} CypolSymmetryClass;

// A mode sampled on a grid.
typedef struct CypolField CypolField;

// A state in a truncated Fock space.
typedef struct CypolFockState CypolFockState;

// A 4x4 operator on the mode coefficients.
typedef struct CypolTransform CypolTransform;

typedef struct CypolComplex {
  double re;
  double im;
} CypolComplex;

// Coefficients on `(psi10 x, psi10 y, psi01 x, psi01 y)`.
typedef struct CypolCoeff4 {
  struct CypolComplex c[4];
} CypolCoeff4;

typedef struct CypolSchmidt {
  double lambda[2];
  double k;
} CypolSchmidt;

// `sphere` is `+1` or `-1`.
typedef struct CypolSpherePoint {
  double theta;
  double phi;
  int32_t sphere;
} CypolSpherePoint;

typedef struct CypolMomentum {
  double p[3];
  double p_sp[3];
  double l[3];
  double s[3];
  double j[3];
} CypolMomentum;

typedef struct CypolSymmetry {
  enum CypolSymmetryClass symmetry_class;
  double kernel_residual_plus;
  double kernel_residual_minus;
  bool unitary;
} CypolSymmetry;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until the next call.
const char *cypol_last_error(void);

// Basis mode by index: 0 `R+`, 1 `A+`, 2 `R-`, 3 `A-`.
//
// # Safety
// `out_coeff` must be NULL or valid for writes.
enum CypolStatus cypol_cpm_basis(uint32_t label, struct CypolCoeff4 *out_coeff);

// `a u_R + b u_A` on the given sphere; requires `|a|^2 + |b|^2 = 1`.
//
// # Safety
// `out_coeff` must be NULL or valid for writes.
enum CypolStatus cypol_make_uab(struct CypolComplex a,
                                struct CypolComplex b,
                                int32_t sphere,
                                struct CypolCoeff4 *out_coeff);

// # Safety
// Pointers must be NULL or valid.
enum CypolStatus cypol_schmidt(const struct CypolCoeff4 *coeff, struct CypolSchmidt *out_result);

// Point of the component of `coeff` on `sphere`, and that component's weight.
//
// # Safety
// Pointers must be NULL or valid.
enum CypolStatus cypol_hps_point(const struct CypolCoeff4 *coeff,
                                 int32_t sphere,
                                 struct CypolSpherePoint *out_point,
                                 double *out_weight);

// Applies rule `'a'`, `'b'` or `'c'`.
//
// # Safety
// Pointers must be NULL or valid.
enum CypolStatus cypol_hps_transform(const struct CypolSpherePoint *point,
                                     char rule,
                                     struct CypolSpherePoint *out_point);

// Samples `coeff` on an `n x n` grid covering `[-half_extent w0, half_extent w0]^2`.
//
// # Safety
// Pointers must be NULL or valid.
enum CypolStatus cypol_field_new(const struct CypolCoeff4 *coeff,
                                 double w0,
                                 double k,
                                 size_t n,
                                 double half_extent,
                                 struct CypolField **out_field);

// Samples per axis.
//
// # Safety
// Pointers must be NULL or valid.
enum CypolStatus cypol_field_size(const struct CypolField *field, size_t *out_n);

// Copies `n * n` intensities, row major with rows along `y`, into `buf`.
//
// # Safety
// `buf` must be NULL or valid for `len` writes.
enum CypolStatus cypol_field_intensity(const struct CypolField *field, double *buf, size_t len);

// Integrated momentum, spin and angular momentum per unit length on the field's grid.
//
// # Safety
// Pointers must be NULL or valid.
enum CypolStatus cypol_field_momentum(const struct CypolField *field,
                                      struct CypolMomentum *out_result);

// # Safety
// `field` must be NULL or a handle from [`cypol_field_new`] not yet freed.
void cypol_field_free(struct CypolField *field);

// Composes a `;`-separated element list such as `"hwp:0; qwp:0.3"`, applied left to right.
//
// # Safety
// `elements` must be NULL or a NUL-terminated string; `out_transform` NULL or valid.
enum CypolStatus cypol_transform_parse(const char *elements, struct CypolTransform **out_transform);

// # Safety
// Pointers must be NULL or valid.
enum CypolStatus cypol_transform_apply(const struct CypolTransform *transform,
                                       const struct CypolCoeff4 *coeff,
                                       struct CypolCoeff4 *out_coeff);

// Classifies the transform against both rotation laws.
//
// # Safety
// Pointers must be NULL or valid.
enum CypolStatus cypol_transform_symmetry(const struct CypolTransform *transform,
                                          struct CypolSymmetry *out_result);

// # Safety
// `transform` must be NULL or a handle from [`cypol_transform_parse`] not yet freed.
void cypol_transform_free(struct CypolTransform *transform);

// Coherent state of amplitude `alpha` in the mode `a u_R + b u_A` (co-rotating sphere),
// on the four-mode space truncated at `n_max`.
//
// # Safety
// `out_state` must be NULL or valid.
enum CypolStatus cypol_fock_coherent(struct CypolComplex alpha,
                                     struct CypolComplex a,
                                     struct CypolComplex b,
                                     size_t n_max,
                                     struct CypolFockState **out_state);

// Single photon in the mode `a u_R + b u_A`.
//
// # Safety
// `out_state` must be NULL or valid.
enum CypolStatus cypol_fock_single_photon(struct CypolComplex a,
                                          struct CypolComplex b,
                                          size_t n_max,
                                          struct CypolFockState **out_state);

// Two-mode squeezed vacuum of modes 3 and 4 on the two-mode space.
//
// # Safety
// `out_state` must be NULL or valid.
enum CypolStatus cypol_fock_two_mode_squeezed(struct CypolComplex zeta,
                                              size_t n_max,
                                              struct CypolFockState **out_state);

// Number of modes in the state's space (4 or 2).
//
// # Safety
// Pointers must be NULL or valid.
enum CypolStatus cypol_fock_mode_count(const struct CypolFockState *state, size_t *out_count);

// # Safety
// Pointers must be NULL or valid.
enum CypolStatus cypol_fock_norm(const struct CypolFockState *state, double *out_norm);

// # Safety
// Pointers must be NULL or valid.
enum CypolStatus cypol_fock_mean_photons(const struct CypolFockState *state, double *out_mean);

// Amplitude of the number state with the given occupations, one per mode.
//
// # Safety
// `occupations` must be NULL or valid for `len` reads; other pointers NULL or valid.
enum CypolStatus cypol_fock_amplitude(const struct CypolFockState *state,
                                      const size_t *occupations,
                                      size_t len,
                                      struct CypolComplex *out_amp);

// Entanglement entropy (nats) between the listed mode labels and the rest.
//
// # Safety
// `modes` must be NULL or valid for `len` reads; other pointers NULL or valid.
enum CypolStatus cypol_fock_entropy(const struct CypolFockState *state,
                                    const uint8_t *modes,
                                    size_t len,
                                    double *out_entropy);

// Single-photon wavefunction `<0|E+|psi>` as mode coefficients (four-mode states only).
//
// # Safety
// Pointers must be NULL or valid.
enum CypolStatus cypol_fock_photon_wavefunction(const struct CypolFockState *state,
                                                struct CypolCoeff4 *out_coeff);

// # Safety
// `state` must be NULL or a handle from a `cypol_fock_*` constructor not yet freed.
void cypol_fock_free(struct CypolFockState *state);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYPOL_H */
