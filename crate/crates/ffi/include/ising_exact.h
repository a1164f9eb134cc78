#ifndef ISING_EXACT_H
#define ISING_EXACT_H

#include <stddef.h>
#include <stdint.h>

typedef enum IsingStatus {
  ISING_STATUS_OK = 0,
  ISING_STATUS_NULL_POINTER = 1,
  ISING_STATUS_DOMAIN = 2,
  ISING_STATUS_CAPACITY = 3,
  ISING_STATUS_SINGULAR = 4,
  ISING_STATUS_INVALID_ARGUMENT = 5,
  ISING_STATUS_PANIC = 6,
} IsingStatus;

typedef enum IsingFreeEnergyMethod {
  ISING_FREE_ENERGY_METHOD_ONSAGER = 0,
  ISING_FREE_ENERGY_METHOD_FERMIONIC = 1,
  ISING_FREE_ENERGY_METHOD_DIRAC = 2,
  ISING_FREE_ENERGY_METHOD_TRIANGULAR = 3,
} IsingFreeEnergyMethod;

typedef enum IsingBoundary {
  ISING_BOUNDARY_FREE = 0,
  ISING_BOUNDARY_CYLINDER_H = 1,
  ISING_BOUNDARY_CYLINDER_V = 2,
  ISING_BOUNDARY_TORUS = 3,
} IsingBoundary;

typedef enum IsingGeometry {
  ISING_GEOMETRY_CHAIN = 0,
  ISING_GEOMETRY_SQUARE = 1,
  ISING_GEOMETRY_TRIANGULAR = 2,
  ISING_GEOMETRY_HONEYCOMB = 3,
} IsingGeometry;

typedef enum IsingMethod {
  ISING_METHOD_ORACLE = 0,
  ISING_METHOD_TRANSFER = 1,
  ISING_METHOD_KAUFMAN = 2,
  ISING_METHOD_PFAFFIAN = 3,
  ISING_METHOD_KAC_WARD = 4,
  ISING_METHOD_CHAIN_TRANSFER = 5,
  ISING_METHOD_CHAIN_RECURSIVE = 6,
  ISING_METHOD_CHAIN_INDUCTION = 7,
  ISING_METHOD_TRIANGULAR_SPECTRAL = 8,
} IsingMethod;

// Opaque lattice with its couplings.
typedef struct IsingLattice IsingLattice;

// Opaque dense antisymmetric matrix.
typedef struct IsingSkewMatrix IsingSkewMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code.
const char *ising_status_str(enum IsingStatus status);

// Message of the last failed call on this thread; valid until the next failure on this thread.
const char *ising_last_error(void);

double ising_critical_coupling(void);

// # Safety
// `out` must be null or valid for writes.
enum IsingStatus ising_dual_coupling(double k, double *out);

// `-beta f` per site. `k2` and `k3` are ignored where the method has fewer couplings.
//
// # Safety
// `out` must be null or valid for writes.
enum IsingStatus ising_free_energy(enum IsingFreeEnergyMethod method,
                                   double k1,
                                   double k2,
                                   double k3,
                                   size_t points,
                                   double *out);

// Weighted perfect-matching count of an `rows x cols` grid: the closed-form product for
// free boundaries, the Pfaffian otherwise.
//
// # Safety
// `out` must be null or valid for writes.
enum IsingStatus ising_dimer_count(size_t rows,
                                   size_t cols,
                                   double z1,
                                   double z2,
                                   enum IsingBoundary boundary,
                                   double *out);

// Triangular couplings, scale `R` and modulus `k` for honeycomb couplings `l[0..3]`.
//
// # Safety
// `l` must point to 3 readable doubles and `k_out` to 3 writable doubles;
// `r_out` and `modulus_out` must be null or valid for writes.
enum IsingStatus ising_star_to_triangle(const double *l,
                                        double *k_out,
                                        double *r_out,
                                        double *modulus_out);

// Complete elliptic integrals `K(k)` and `E(k)` for `0 <= k < 1`.
//
// # Safety
// `k_out` and `e_out` must be null or valid for writes.
enum IsingStatus ising_complete_elliptic(double k, double *k_out, double *e_out);

// Nearest-neighbour correlation `f(K, k)`.
//
// # Safety
// `out` must be null or valid for writes.
enum IsingStatus ising_correlation_f(double big_k, double k, double *out);

// Creates a lattice handle. Pass NaN for `kd` on lattices without a third coupling;
// a nonzero `h` is accepted on chains only.
//
// # Safety
// `out` must be null or valid for writes. The handle must be released with
// [`ising_lattice_free`].
enum IsingStatus ising_lattice_new(size_t rows,
                                   size_t cols,
                                   enum IsingGeometry geometry,
                                   enum IsingBoundary boundary,
                                   double kh,
                                   double kv,
                                   double kd,
                                   double h,
                                   struct IsingLattice **out);

// `ln Z` of the lattice by one method; `per_site` is set to 1 when the value is per site.
//
// # Safety
// `lattice` must come from [`ising_lattice_new`]; `log_z` must be valid for writes and
// `per_site` null or valid for writes.
enum IsingStatus ising_lattice_log_z(const struct IsingLattice *lattice,
                                     enum IsingMethod method,
                                     double *log_z,
                                     int *per_site);

// Number of sites of the lattice, or 0 for a null handle.
//
// # Safety
// `lattice` must be null or come from [`ising_lattice_new`].
size_t ising_lattice_num_sites(const struct IsingLattice *lattice);

// # Safety
// `lattice` must be null or come from [`ising_lattice_new`] and not be freed twice.
void ising_lattice_free(struct IsingLattice *lattice);

// Creates a zero antisymmetric matrix of even dimension.
//
// # Safety
// `out` must be null or valid for writes. The handle must be released with
// [`ising_skew_free`].
enum IsingStatus ising_skew_new(size_t dim, struct IsingSkewMatrix **out);

// Sets `a[i][j] = x` and `a[j][i] = -x`.
//
// # Safety
// `m` must come from [`ising_skew_new`].
enum IsingStatus ising_skew_set(struct IsingSkewMatrix *m, size_t i, size_t j, double x);

// # Safety
// `m` must come from [`ising_skew_new`]; `out` must be null or valid for writes.
enum IsingStatus ising_skew_get(const struct IsingSkewMatrix *m, size_t i, size_t j, double *out);

// Pfaffian as `sign * exp(ln_abs)`; a zero Pfaffian has sign 0 and `ln_abs = -inf`.
//
// # Safety
// `m` must come from [`ising_skew_new`]; `sign` and `ln_abs` must be null or valid for writes.
enum IsingStatus ising_skew_pfaffian(const struct IsingSkewMatrix *m, int *sign, double *ln_abs);

// # Safety
// `m` must be null or come from [`ising_skew_new`] and not be freed twice.
void ising_skew_free(struct IsingSkewMatrix *m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISING_EXACT_H */
