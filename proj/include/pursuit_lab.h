#ifndef PURSUIT_LAB_H
#define PURSUIT_LAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PL_API __declspec(dllexport)
#else
#define PL_API __attribute__((visibility("default")))
#endif

/* Status codes double as process exit codes for the command-line tool. */
typedef enum pl_status {
  PL_OK = 0,
  PL_ERR_CONFIG = 2,
  PL_ERR_NUMERIC = 3,
  PL_ERR_COLLISION = 4,
  PL_ERR_PRECONDITION = 5,
  PL_ERR_INVALID_ARGUMENT = 6,
  PL_ERR_INTERNAL = 7
} pl_status;

typedef struct pl_params pl_params;
typedef struct pl_world pl_world;

/* Message of the last failed call on this thread; empty after success. */
PL_API const char* pl_last_error(void);
/* For configuration errors, the offending key; empty otherwise. */
PL_API const char* pl_last_error_key(void);

PL_API const char* pl_version(void);

/* ---- parameters ---- */

PL_API pl_status pl_params_homogeneous(int n, double mu, double lambda, double alpha, double alpha0,
                                       pl_params** out);
/* Per-agent arrays of length n; mu_b and nu may be NULL (mu_b = mu, nu = 1). */
PL_API pl_status pl_params_create(int n, double lambda, const double* mu, const double* mu_b,
                                  const double* alpha, const double* alpha0, const double* nu,
                                  pl_params** out);
PL_API void pl_params_destroy(pl_params* p);
PL_API int pl_params_n(const pl_params* p);

/* ---- full space ---- */

/* headings in radians; positions as interleaved x,y pairs (2n doubles). */
PL_API pl_status pl_world_create(int n, const double* positions, const double* headings, double beacon_x,
                                 double beacon_y, pl_world** out);
PL_API pl_status pl_world_random(int n, uint64_t seed, double half_width, double beacon_x, double beacon_y,
                                 pl_world** out);
PL_API pl_status pl_world_equilibrium(const pl_params* p, int m, double beacon_x, double beacon_y,
                                      pl_world** out);
PL_API void pl_world_destroy(pl_world* w);
PL_API int pl_world_n(const pl_world* w);
PL_API double pl_world_time(const pl_world* w);
/* Writes 2n position doubles and n heading doubles. Either may be NULL. */
PL_API pl_status pl_world_get(const pl_world* w, double* positions, double* headings);

/* Steering control u_i for agent i (0-based). */
PL_API pl_status pl_steering(const pl_world* w, const pl_params* p, int agent, double* u);

/* Advances the world in place by `duration` with fixed RK4 step dt. */
PL_API pl_status pl_simulate(pl_world* w, const pl_params* p, double duration, double dt);

/* Shape layout: 5n doubles, per agent (rho, kappa, theta, rho_b, kappa_b). */
PL_API pl_status pl_extract_shape(const pl_world* w, double* shape, size_t len);
PL_API pl_status pl_shape_derivative(const double* shape, size_t len, const pl_params* p, double* out);
PL_API pl_status pl_integrate_shape(double* shape, size_t len, const pl_params* p, double duration, double dt,
                                    double* max_residual);

/* ---- equilibria and stability ---- */

PL_API pl_status pl_equilibrium_count(const pl_params* p, int* count);
/* Fills rho_b, alpha_star and the branch index m of the leftmost all-(+1) equilibrium. */
PL_API pl_status pl_leftmost_equilibrium(const pl_params* p, int m, double* rho_b, double* alpha_star);
/* 1 if the necessary Routh conditions hold for every mode, else 0. */
PL_API pl_status pl_routh_necessary(const pl_params* p, int m, int* ok);
/* Interleaved (re, im) pairs for all 5n eigenvalues; `len` counts doubles (10n). */
PL_API pl_status pl_spectrum(const pl_params* p, int m, double* values, size_t len, int* axis_count);

/* ---- pure shape ---- */

/* rho1 of the reduced equilibrium and its stable kappa1; PL_ERR_PRECONDITION when none exists. */
PL_API pl_status pl_reduced_equilibrium(const pl_params* p, int k, double* rho1, double* kappa1_stable);
PL_API pl_status pl_invariant_region(const pl_params* p, int k, int* holds, double* value);
PL_API pl_status pl_asymptote(const pl_params* p, int k, int* conclusive, double* kappa1);
PL_API pl_status pl_reduced_derivative(const pl_params* p, int k, double kappa1, double rho1, double* dkappa1,
                                       double* drho1);

/* ---- configured runs ---- */

/* mode: simulate | shape-sim | equilibria | stability | pure-shape | portrait | sweep.
   out_dir and seed may be NULL to keep the configured values. */
PL_API pl_status pl_run(const char* mode, const char* config_path, const char* out_dir, const uint64_t* seed,
                        const char* const* overrides, size_t override_count);

#ifdef __cplusplus
}
#endif

#endif
