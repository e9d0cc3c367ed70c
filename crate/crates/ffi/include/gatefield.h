#ifndef GATEFIELD_H
#define GATEFIELD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GfBoundMethod {
  GF_BOUND_METHOD_REAL_SPACE = 0,
  GF_BOUND_METHOD_DUAL_FORM = 1,
  GF_BOUND_METHOD_CLOSED_FORM = 2,
  GF_BOUND_METHOD_DISCRETE_SUM = 3,
} GfBoundMethod;

typedef enum GfMode {
  GF_MODE_EXACT = 0,
  GF_MODE_PAPER_CONSTANTS = 1,
} GfMode;

/**
 * Result code of every fallible call.
 */
typedef enum GfStatus {
  GF_STATUS_OK = 0,
  /**
   * A parameter violated a precondition.
   */
  GF_STATUS_INVALID_ARGUMENT = 1,
  /**
   * A required pointer was null.
   */
  GF_STATUS_NULL_POINTER = 2,
  /**
   * A numerical precondition failed (decay, resolution, support, ...).
   */
  GF_STATUS_NUMERICAL = 3,
  /**
   * File could not be read or parsed.
   */
  GF_STATUS_IO = 4,
  /**
   * Internal panic, caught at the boundary.
   */
  GF_STATUS_PANIC = 5,
} GfStatus;

typedef enum GfVarianceMethod {
  GF_VARIANCE_METHOD_CLOSED_FORM = 0,
  GF_VARIANCE_METHOD_RADIAL_QUADRATURE = 1,
  GF_VARIANCE_METHOD_SPHERICAL_QUADRATURE = 2,
  GF_VARIANCE_METHOD_GRID_SUM = 3,
} GfVarianceMethod;

/**
 * Opaque gate handle.
 */
typedef struct GfGate GfGate;

/**
 * Opaque periodic-box lattice handle.
 */
typedef struct GfLattice GfLattice;

typedef struct GfVariance {
  double value;
  int32_t method;
} GfVariance;

/**
 * `h(η, γ)` and the Robertson bound `|h|/2`.
 */
typedef struct GfBound {
  double h;
  double robertson_bound;
  int32_t method;
} GfBound;

/**
 * `margin` is meaningful only when `constrained` is nonzero.
 */
typedef struct GfUncertainty {
  double delta_e;
  double delta_h;
  double bound;
  double product;
  double margin;
  bool constrained;
} GfUncertainty;

typedef struct GfOptimalSeparation {
  double distance;
  double peak_factor;
} GfOptimalSeparation;

typedef struct GfMcEstimate {
  double estimate;
  double std_error;
  uint64_t n_samples;
  uint64_t seed;
  double imag_residual;
} GfMcEstimate;

/**
 * SI scenario report.
 */
typedef struct GfScenario {
  double gate_l;
  double intensity;
  double bound_product_max;
  double optimal_separation;
  double eh_product;
  double ratio;
  double delta_e_over_e;
} GfScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * Valid until the next call into the library on the same thread.
 */
const char *gf_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gf_version(void);

/**
 * Gaussian gate `amplitude · direction · δ(r - center; l)`.
 *
 * # Safety
 * `center` and `direction` point to 3 doubles; `out` is writable.
 */
enum GfStatus gf_gate_gaussian(const double *center,
                               double l,
                               const double *direction,
                               double amplitude,
                               struct GfGate **out);

/**
 * Longitudinal gate `amplitude · ∇δ(r - center; l)`.
 *
 * # Safety
 * `center` points to 3 doubles; `out` is writable.
 */
enum GfStatus gf_gate_longitudinal(const double *center,
                                   double l,
                                   double amplitude,
                                   struct GfGate **out);

/**
 * Grid gate read from a binary or `.json` grid file.
 *
 * # Safety
 * `path` is a NUL-terminated UTF-8 string; `out` is writable.
 */
enum GfStatus gf_gate_from_file(const char *path, struct GfGate **out);

/**
 * `wa · a + wb · b` for analytic gates.
 *
 * # Safety
 * `a`, `b` are live gate handles; `out` is writable.
 */
enum GfStatus gf_gate_superpose(double wa,
                                const struct GfGate *a,
                                double wb,
                                const struct GfGate *b,
                                struct GfGate **out);

/**
 * The gate translated by `by`.
 *
 * # Safety
 * `gate` is a live handle; `by` points to 3 doubles; `out` is writable.
 */
enum GfStatus gf_gate_shifted(const struct GfGate *gate, const double *by, struct GfGate **out);

/**
 * Releases a gate; null is ignored.
 *
 * # Safety
 * `gate` was returned by this library and is not used afterwards.
 */
void gf_gate_free(struct GfGate *gate);

/**
 * Vacuum variance `⟨E(η)²⟩`.
 *
 * # Safety
 * `gate` is a live handle; `out` is writable.
 */
enum GfStatus gf_variance(const struct GfGate *gate, struct GfVariance *out);

/**
 * `h(η, γ)`, closed form when both gates are Gaussian superpositions,
 * real-space quadrature otherwise.
 *
 * # Safety
 * `eta`, `gamma` are live handles; `out` is writable.
 */
enum GfStatus gf_commutator(const struct GfGate *eta,
                            const struct GfGate *gamma,
                            struct GfBound *out);

/**
 * `h(η, γ)` by real-space quadrature of `(curl η)·γ`.
 *
 * # Safety
 * `eta`, `gamma` are live handles; `out` is writable.
 */
enum GfStatus gf_commutator_real_space(const struct GfGate *eta,
                                       const struct GfGate *gamma,
                                       struct GfBound *out);

/**
 * `h(η, γ)` by real-space quadrature of `(curl γ)·η`.
 *
 * # Safety
 * `eta`, `gamma` are live handles; `out` is writable.
 */
enum GfStatus gf_commutator_dual_form(const struct GfGate *eta,
                                      const struct GfGate *gamma,
                                      struct GfBound *out);

/**
 * Vacuum uncertainty report for the pair.
 *
 * # Safety
 * `eta`, `gamma` are live handles; `out` is writable.
 */
enum GfStatus gf_uncertainty(const struct GfGate *eta,
                             const struct GfGate *gamma,
                             struct GfUncertainty *out);

/**
 * Separation maximizing the Gaussian overlap factor.
 *
 * # Safety
 * `out` is writable.
 */
enum GfStatus gf_optimal_separation(double l, struct GfOptimalSeparation *out);

/**
 * `√((l² + l′²)/2)`.
 */
double gf_effective_width(double l, double l_prime);

/**
 * Box of side `box_size` with modes `|n_i| ≤ cutoff`.
 *
 * # Safety
 * `out` is writable.
 */
enum GfStatus gf_lattice_new(double box_size, uint32_t cutoff, struct GfLattice **out);

/**
 * Box of side `box_size` whose cutoff reaches `k_max`.
 *
 * # Safety
 * `out` is writable.
 */
enum GfStatus gf_lattice_with_k_max(double box_size, double k_max, struct GfLattice **out);

/**
 * Sets the allowed gate mass outside the box.
 *
 * # Safety
 * `lattice` is a live handle.
 */
enum GfStatus gf_lattice_set_support_tolerance(struct GfLattice *lattice, double tolerance);

/**
 * Number of modes, or 0 for a null handle.
 *
 * # Safety
 * `lattice` is null or a live handle.
 */
uint64_t gf_lattice_mode_count(const struct GfLattice *lattice);

/**
 * Releases a lattice; null is ignored.
 *
 * # Safety
 * `lattice` was returned by this library and is not used afterwards.
 */
void gf_lattice_free(struct GfLattice *lattice);

/**
 * Box-mode sum for the vacuum variance.
 *
 * # Safety
 * `gate`, `lattice` are live handles; `out` is writable.
 */
enum GfStatus gf_discrete_variance(const struct GfGate *gate,
                                   const struct GfLattice *lattice,
                                   double *out);

/**
 * Box-mode sum for `h(η, γ)`.
 *
 * # Safety
 * `eta`, `gamma`, `lattice` are live handles; `out` is writable.
 */
enum GfStatus gf_discrete_h(const struct GfGate *eta,
                            const struct GfGate *gamma,
                            const struct GfLattice *lattice,
                            struct GfBound *out);

/**
 * `Σ_k Σ_α k/2` over the lattice, or NaN for a null handle.
 *
 * # Safety
 * `lattice` is null or a live handle.
 */
double gf_zero_point_energy(const struct GfLattice *lattice);

/**
 * Monte Carlo estimate of the variance over vacuum field samples.
 *
 * # Safety
 * `gate`, `lattice` are live handles; `out` is writable.
 */
enum GfStatus gf_mc_variance(const struct GfGate *gate,
                             const struct GfLattice *lattice,
                             uint64_t seed,
                             uint64_t n_samples,
                             struct GfMcEstimate *out);

/**
 * Nanometer-gate scenario in SI units; `mode` is a [`GfMode`] value.
 *
 * # Safety
 * `out` is writable.
 */
enum GfStatus gf_nanogate_example(double l, double intensity, int32_t mode, struct GfScenario *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GATEFIELD_H */
