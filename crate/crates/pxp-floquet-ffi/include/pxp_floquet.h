/* C interface to the driven-PXP Floquet simulator. */

#ifndef PXP_FLOQUET_H
#define PXP_FLOQUET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum PxpStatus {
  PXP_STATUS_OK = 0,
  // A required pointer argument was null.
  PXP_STATUS_NULL_POINTER = 1,
  // Malformed argument (bad state name, bad numeric input).
  PXP_STATUS_USAGE = 2,
  // Size outside the supported range.
  PXP_STATUS_SIZE = 3,
  // Bit pattern outside the blockaded subspace.
  PXP_STATUS_INVALID_STATE = 4,
  // Numeric argument outside its domain.
  PXP_STATUS_DOMAIN = 5,
  // Buffer or object dimensions disagree.
  PXP_STATUS_DIMENSION_MISMATCH = 6,
  // Time evolution lost unitarity.
  PXP_STATUS_INTEGRATION = 7,
  // Floquet eigendecomposition failed.
  PXP_STATUS_DECOMPOSITION = 8,
  // Fewer than two dominant Floquet states.
  PXP_STATUS_NO_ARC = 9,
  // Least-squares fit failed.
  PXP_STATUS_FIT = 10,
  // Filesystem error.
  PXP_STATUS_IO = 11,
} PxpStatus;

// Opaque handle to a blockaded basis.
typedef struct PxpBasis PxpBasis;

// Opaque handle to a one-period propagator together with its basis; the
// eigendecomposition is computed on first use and cached.
typedef struct PxpPropagator PxpPropagator;

// Result block for [`pxp_fit_nrev`].
typedef struct PxpFitResult {
  double gamma;
  double gamma_err;
  double alpha;
  double alpha_err;
  double residual_norm;
  uint64_t points_used;
} PxpFitResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *pxp_version(void);

// Copy the last error message for this thread into `buffer` (up to
// `capacity` bytes including the terminator) and return the full message
// length in bytes, excluding the terminator. A null buffer just queries
// the length.
//
// # Safety
// `buffer`, when non-null, must point to `capacity` writable bytes.
uintptr_t pxp_last_error_message(char *buffer, uintptr_t capacity);

// n-th Fibonacci number (F(1) = F(2) = 1).
//
// # Safety
// `out` must be a valid pointer.
enum PxpStatus pxp_fibonacci(uint64_t n, uint64_t *out);

// Bessel function of the first kind, order zero.
double pxp_bessel_j0(double x);

// Exact ergodic ⟨Z⟩ at `site` (1-based) of an `l`-site chain.
//
// # Safety
// `out` must be a valid pointer.
enum PxpStatus pxp_ergodic_z(uint32_t site, uint32_t l, double *out);

// Predicted revival index ω_d/Δε; +inf at zero spacing (the narrowed-
// spectrum signal), never an error.
double pxp_revival_index(double delta_eps, double omega_d);

// Enumerate the blockaded basis of an `l`-site chain.
//
// # Safety
// `out` must be a valid pointer; the result must be released with
// [`pxp_basis_free`].
enum PxpStatus pxp_basis_new(uint32_t l, struct PxpBasis **out);

// Release a basis handle; null is a no-op.
//
// # Safety
// `basis` must be null or a pointer from [`pxp_basis_new`], freed once.
void pxp_basis_free(struct PxpBasis *basis);

// Subspace dimension F(L+2).
//
// # Safety
// `basis` and `out` must be valid pointers.
enum PxpStatus pxp_basis_dim(const struct PxpBasis *basis, uint64_t *out);

// Bit pattern at `ordinal` (site j occupies bit j−1).
//
// # Safety
// `basis` and `out` must be valid pointers.
enum PxpStatus pxp_basis_pattern(const struct PxpBasis *basis, uint64_t ordinal, uint64_t *out);

// Ordinal of a blockaded bit pattern.
//
// # Safety
// `basis` and `out` must be valid pointers.
enum PxpStatus pxp_basis_index_of(const struct PxpBasis *basis, uint64_t pattern, uint64_t *out);

// Build the one-period propagator Û(T, 0) for an `l`-site chain driven at
// amplitude `h` and frequency `omega_d`, with `steps` Strang substeps per
// period (minimum 16; 512 is the standard choice).
//
// # Safety
// `out` must be a valid pointer; the result must be released with
// [`pxp_propagator_free`].
enum PxpStatus pxp_propagator_new(uint32_t l,
                                  double h,
                                  double omega_d,
                                  uint32_t steps,
                                  struct PxpPropagator **out);

// Release a propagator handle; null is a no-op.
//
// # Safety
// `propagator` must be null or a pointer from [`pxp_propagator_new`],
// freed once.
void pxp_propagator_free(struct PxpPropagator *propagator);

// Matrix dimension of the propagator (= basis size).
//
// # Safety
// `propagator` and `out` must be valid pointers.
enum PxpStatus pxp_propagator_dim(const struct PxpPropagator *propagator, uint64_t *out);

// ‖U†U − 1‖_max of the stored propagator.
//
// # Safety
// `propagator` and `out` must be valid pointers.
enum PxpStatus pxp_propagator_unitarity_defect(const struct PxpPropagator *propagator, double *out);

// Stroboscopic fidelities ℱ(nT) for n = 0..=n_max of the named initial
// state. `out` must hold n_max + 1 doubles.
//
// # Safety
// `propagator`, `state` and `out` must be valid; `out` must have space for
// `n_max + 1` doubles.
enum PxpStatus pxp_fidelity_orbit(const struct PxpPropagator *propagator,
                                  const char *state,
                                  uint64_t n_max,
                                  double *out);

// Quasi-energies (ascending, inside (−ω_d/2, ω_d/2]) and squared overlaps
// of the named initial state with each Floquet state. Both buffers must
// hold `dim` doubles (see [`pxp_propagator_dim`]).
//
// # Safety
// All pointers must be valid; both buffers must have space for `dim`
// doubles.
enum PxpStatus pxp_floquet_spectrum(const struct PxpPropagator *propagator,
                                    const char *state,
                                    double *quasi_energies,
                                    double *overlaps_sq);

// Dominant quasi-energy spacing Δε of the named initial state at overlap
// threshold `eta` (fraction of the maximum overlap, in (0, 1)).
//
// # Safety
// `propagator`, `state` and `out` must be valid pointers.
enum PxpStatus pxp_dominant_spacing(const struct PxpPropagator *propagator,
                                    const char *state,
                                    double eta,
                                    double *out);

// Chain-averaged ⟨Z⟩(nT) for n = 0..=n_max of the named initial state.
// `out` must hold n_max + 1 doubles.
//
// # Safety
// All pointers must be valid; `out` must have space for `n_max + 1`
// doubles.
enum PxpStatus pxp_chain_z_series(const struct PxpPropagator *propagator,
                                  const char *state,
                                  uint64_t n_max,
                                  double *out);

// Fit (h, n_rev) samples against the Bessel revival model inside the
// window [window_lo, window_hi]. `model` is 0 for the offset model
// n_rev = ω_d/(γJ₀) + α, 1 for the proportional model.
//
// # Safety
// `h` and `n_rev` must point to `len` doubles; `out` must be valid.
enum PxpStatus pxp_fit_nrev(const double *h,
                            const double *n_rev,
                            uintptr_t len,
                            double omega_d,
                            uint32_t model,
                            double window_lo,
                            double window_hi,
                            struct PxpFitResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PXP_FLOQUET_H */
