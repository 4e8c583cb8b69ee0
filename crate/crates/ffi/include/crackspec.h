#ifndef CRACKSPEC_H
#define CRACKSPEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call.
 */
typedef enum CsStatus {
  CS_STATUS_OK = 0,
  CS_STATUS_RANGE = 1,
  CS_STATUS_DOMAIN = 2,
  CS_STATUS_VALIDATION = 3,
  CS_STATUS_GEOMETRY = 4,
  CS_STATUS_UNSUPPORTED = 5,
  CS_STATUS_DIMENSION = 6,
  CS_STATUS_NUMERIC = 7,
  CS_STATUS_NO_CONVERGENCE = 8,
  CS_STATUS_INSUFFICIENT_DATA = 9,
  CS_STATUS_DEGENERATE_VECTOR = 10,
  CS_STATUS_PARSE = 11,
  CS_STATUS_IO = 12,
  CS_STATUS_NULL_POINTER = 13,
  CS_STATUS_PANIC = 14,
} CsStatus;

/**
 * Quarter-disk boundary combination on the rays `theta = 0` and `theta = pi/2`.
 */
typedef enum CsQuarterCase {
  CS_QUARTER_CASE_NND = 0,
  CS_QUARTER_CASE_DDD = 1,
  CS_QUARTER_CASE_NDD = 2,
  CS_QUARTER_CASE_DND = 3,
} CsQuarterCase;

/**
 * Opaque list of crossings.
 */
typedef struct CsCrossingList CsCrossingList;

/**
 * Opaque cracked-disk geometry.
 */
typedef struct CsSpec CsSpec;

/**
 * Opaque merged spectrum.
 */
typedef struct CsSpectrum CsSpectrum;

/**
 * One stored eigenvalue in ascending order.
 */
typedef struct CsEigenvalue {
  double lambda;
  double residual;
  /**
   * Multiplicity in the whole domain (1 or 2).
   */
  uint32_t weight;
  /**
   * Floquet index of the sector.
   */
  uint32_t ell;
  /**
   * Position inside the sector, 0-based.
   */
  uint32_t index;
} CsEigenvalue;

typedef struct CsAdditivity {
  double delta;
  double cap_total;
  double cap_plus;
  double cap_minus;
  double ratio;
} CsAdditivity;

typedef struct CsCrossing {
  double epsilon_star;
  double lambda_star;
  uint32_t rank;
  uint32_t multiplicity;
  uint32_t ell_a;
  uint32_t ell_b;
} CsCrossing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread (empty after a success).
 * Valid until the next call into the library on the same thread.
 */
const char *crackspec_last_error(void);

/**
 * Library version with file-format schema versions.
 */
const char *crackspec_version(void);

/**
 * # Safety
 * `out_value` must be null or valid for writes.
 */
enum CsStatus crackspec_bessel_j(uint32_t ell, double x, double *out_value);

/**
 * `k`-th positive zero of `J_ell` (`k >= 1`).
 *
 * # Safety
 * `out_value` must be null or valid for writes.
 */
enum CsStatus crackspec_bessel_zero(uint32_t ell, uint32_t k, double *out_value);

/**
 * # Safety
 * `out_value` must be null or valid for writes.
 */
enum CsStatus crackspec_choose_r1(double r2, double *out_value);

/**
 * # Safety
 * `out_spec` must be null or valid for writes.
 */
enum CsStatus crackspec_spec_new(uint32_t n,
                                 double epsilon,
                                 double r1,
                                 double r2,
                                 struct CsSpec **out_spec);

/**
 * Releases a geometry; null is ignored.
 *
 * # Safety
 * `spec` must be null or a geometry from `crackspec_spec_new` that was not freed yet.
 */
void crackspec_spec_free(struct CsSpec *spec);

/**
 * Solves every Floquet sector for `k` eigenvalues at resolution `m`.
 *
 * # Safety
 * Handles must be null or live handles from this library, and output pointers null or writable.
 */
enum CsStatus crackspec_solve(const struct CsSpec *spec,
                              size_t m,
                              size_t k,
                              double tol,
                              struct CsSpectrum **out_spectrum);

/**
 * # Safety
 * `spectrum` must be null or a handle from `crackspec_solve` that was not freed yet.
 */
void crackspec_spectrum_free(struct CsSpectrum *spectrum);

/**
 * Number of sector eigenvalues stored (each counted once).
 *
 * # Safety
 * Handles must be null or live handles from this library, and output pointers null or writable.
 */
size_t crackspec_spectrum_len(const struct CsSpectrum *spectrum);

/**
 * # Safety
 * Handles must be null or live handles from this library, and output pointers null or writable.
 */
enum CsStatus crackspec_spectrum_get(const struct CsSpectrum *spectrum,
                                     size_t i,
                                     struct CsEigenvalue *out_value);

/**
 * Writes up to `capacity` eigenvalues counted with multiplicity and stores
 * how many were written.
 *
 * # Safety
 * Handles must be null or live handles from this library, `out_written` null or writable, and `buffer` null or writable for `capacity` values.
 */
enum CsStatus crackspec_spectrum_lowest(const struct CsSpectrum *spectrum,
                                        double *buffer,
                                        size_t capacity,
                                        size_t *out_written);

/**
 * Lowest `count` eigenvalues of one quarter-disk problem of the `N = 2` disk.
 *
 * # Safety
 * Handles must be null or live handles from this library, output pointers null or writable, and `buffer` null or writable for `count` values.
 */
enum CsStatus crackspec_quarter(enum CsQuarterCase case_,
                                double epsilon,
                                double r1,
                                double r2,
                                size_t m,
                                double tol,
                                double *buffer,
                                size_t count);

/**
 * Capacities of two antipodal arcs of half-width `delta`, and of each alone.
 *
 * # Safety
 * Handles must be null or live handles from this library, and output pointers null or writable.
 */
enum CsStatus crackspec_capacity_additivity(double r1,
                                            double r2,
                                            double delta,
                                            size_t m,
                                            struct CsAdditivity *out_value);

/**
 * Sweeps the Floquet sectors of `spec` over `n_eps` ascending openings and
 * reports crossings with rank up to `max_rank`.
 *
 * # Safety
 * Handles must be null or live handles from this library, output pointers null or writable, and `epsilons` null or readable for `n_eps` values.
 */
enum CsStatus crackspec_crossings(const struct CsSpec *spec,
                                  const double *epsilons,
                                  size_t n_eps,
                                  size_t m,
                                  size_t k,
                                  double tol,
                                  size_t max_rank,
                                  struct CsCrossingList **out_list);

/**
 * # Safety
 * Handles must be null or live handles from this library, and output pointers null or writable.
 */
size_t crackspec_crossings_len(const struct CsCrossingList *list);

/**
 * # Safety
 * Handles must be null or live handles from this library, and output pointers null or writable.
 */
enum CsStatus crackspec_crossings_get(const struct CsCrossingList *list,
                                      size_t i,
                                      struct CsCrossing *out_value);

/**
 * # Safety
 * `list` must be null or a handle from `crackspec_crossings` that was not freed yet.
 */
void crackspec_crossings_free(struct CsCrossingList *list);

/**
 * Parses a quarter-case name (`NND`, `DDD`, `NDD`, `DND`, any case).
 *
 * # Safety
 * `name` must be null or a NUL-terminated string, and `out_case` null or writable.
 */
enum CsStatus crackspec_quarter_case_parse(const char *name, enum CsQuarterCase *out_case);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRACKSPEC_H */
