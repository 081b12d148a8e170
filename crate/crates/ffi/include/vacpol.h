#ifndef VACPOL_H
#define VACPOL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define VACPOL_POINT_QUADRATURE 0

#define VACPOL_POINT_BICKLEY 1

#define VACPOL_POINT_MEZO 2

#define VACPOL_POINT_SMALL_R 3

#define VACPOL_POINT_LARGE_R 4

#define VACPOL_POINT_PYYKKO 5

#define VACPOL_FERMI_DIRECT 0

#define VACPOL_FERMI_SOMMERFELD 1

/**
 * Result of every call.
 */
typedef enum VacpolStatus {
  VACPOL_STATUS_OK = 0,
  VACPOL_STATUS_NULL_POINTER = 1,
  VACPOL_STATUS_DOMAIN = 2,
  VACPOL_STATUS_RANGE = 3,
  VACPOL_STATUS_NO_CONVERGENCE = 4,
  VACPOL_STATUS_CONTRACT = 5,
  VACPOL_STATUS_CONFIG = 6,
  VACPOL_STATUS_PANIC = 7,
} VacpolStatus;

/**
 * A Fermi charge distribution. Create with [`vacpol_nucleus_new`] or
 * [`vacpol_nucleus_physical`], release with [`vacpol_nucleus_free`].
 */
typedef struct VacpolNucleus VacpolNucleus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *vacpol_last_error(void);

/**
 * Library version as a static string.
 */
const char *vacpol_version(void);

/**
 * Uehling kernel `g(z)`, `z ≥ 0`.
 */
enum VacpolStatus vacpol_g(double z, double *value);

/**
 * Bickley-Naylor function `Ki_n(z)`.
 */
enum VacpolStatus vacpol_bickley(uint32_t n, double z, double *value);

/**
 * Point-nucleus Uehling potential at `r` for charge `z_nuc`.
 * `est_error` may be null.
 */
enum VacpolStatus vacpol_uehling_point(double r,
                                       double z_nuc,
                                       int32_t method,
                                       double rel_tol,
                                       double *value,
                                       double *est_error);

/**
 * New nucleus with charge `z`, half-density radius `xi` and diffuseness `a`.
 */
enum VacpolStatus vacpol_nucleus_new(double z, double xi, double a, struct VacpolNucleus **nucleus);

/**
 * New nucleus of charge `z` with the default radius and surface thickness.
 */
enum VacpolStatus vacpol_nucleus_physical(double z, struct VacpolNucleus **nucleus);

/**
 * Releases a nucleus. Null is ignored.
 *
 * # Safety
 * `nucleus` must come from one of the constructors and not be used afterwards.
 */
void vacpol_nucleus_free(struct VacpolNucleus *nucleus);

/**
 * Half-density radius, diffuseness and central density of a nucleus.
 * Any out pointer may be null.
 */
enum VacpolStatus vacpol_nucleus_params(const struct VacpolNucleus *nucleus,
                                        double *xi,
                                        double *a,
                                        double *rho0);

/**
 * Uehling potential of a Fermi nucleus at `r`. `est_error` may be null.
 */
enum VacpolStatus vacpol_uehling_fermi(const struct VacpolNucleus *nucleus,
                                       double r,
                                       int32_t method,
                                       double rel_tol,
                                       double *value,
                                       double *est_error);

/**
 * Källén-Sabry potential of a Fermi nucleus at `r`. `est_error` may be null.
 */
enum VacpolStatus vacpol_ks_potential(const struct VacpolNucleus *nucleus,
                                      double r,
                                      double rel_tol,
                                      double *value,
                                      double *est_error);

/**
 * Point-nucleus Källén-Sabry potential. `est_error` may be null.
 */
enum VacpolStatus vacpol_ks_point(double r,
                                  double z_nuc,
                                  double rel_tol,
                                  double *value,
                                  double *est_error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VACPOL_H */
