/* SPDX-License-Identifier: Apache-2.0
 *
 * C API of the fracdiff solver library.
 *
 * The library solves discrete fractional diffusion problems u = L^{-s} b for
 * a symmetric positive definite matrix pencil (K, M), L = M^{-1} K, through
 * rational Krylov, reduced basis, quadrature and direct best-rational-
 * approximation methods.
 *
 * Conventions:
 *  - Every fallible function returns a fracdiff_status; FRACDIFF_OK is 0.
 *    On failure, fracdiff_last_error() gives a thread-local message.
 *  - Objects are opaque handles released with their *_free function.
 *  - Poles are nonpositive reals; -INFINITY encodes the infinite pole.
 *    Snapshots t = -d are nonnegative; +INFINITY encodes the infinite one.
 */
#ifndef FRACDIFF_H
#define FRACDIFF_H

#include <stddef.h>

#if defined(_WIN32)
#define FRACDIFF_API __declspec(dllexport)
#else
#define FRACDIFF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  FRACDIFF_OK = 0,
  FRACDIFF_ERR_INVALID_ARGUMENT = 1,
  FRACDIFF_ERR_FORMAT = 2,
  FRACDIFF_ERR_VALIDATION = 3,
  FRACDIFF_ERR_CONVERGENCE = 4,
  FRACDIFF_ERR_DEGENERACY = 5,
  FRACDIFF_ERR_CONDITIONING = 6,
  FRACDIFF_ERR_RESOURCE_LIMIT = 7,
  FRACDIFF_ERR_DOMAIN = 8,
  FRACDIFF_ERR_INTERNAL = 9
} fracdiff_status;

typedef struct fracdiff_pencil fracdiff_pencil;
typedef struct fracdiff_result fracdiff_result;
typedef struct fracdiff_approximant fracdiff_approximant;

FRACDIFF_API const char* fracdiff_version(void);
FRACDIFF_API const char* fracdiff_status_name(fracdiff_status st);

/* Message describing the most recent failure on the calling thread. */
FRACDIFF_API const char* fracdiff_last_error(void);

/* ---- problems ---------------------------------------------------------- */

FRACDIFF_API fracdiff_status fracdiff_pencil_fd1d(long n, fracdiff_pencil** out);
FRACDIFF_API fracdiff_status fracdiff_pencil_fd2d(long nx, fracdiff_pencil** out);

/* Matrix Market coordinate files; pass NULL for path_m to use M = identity. */
FRACDIFF_API fracdiff_status fracdiff_pencil_load(const char* path_k,
                                                  const char* path_m,
                                                  fracdiff_pencil** out);
FRACDIFF_API fracdiff_status fracdiff_pencil_save(const fracdiff_pencil* p,
                                                  const char* path_k,
                                                  const char* path_m);
FRACDIFF_API void fracdiff_pencil_free(fracdiff_pencil* p);

FRACDIFF_API long fracdiff_pencil_dim(const fracdiff_pencil* p);

/* Spectrum enclosure with relative endpoint accuracy rel_tol. */
FRACDIFF_API fracdiff_status fracdiff_pencil_interval(const fracdiff_pencil* p,
                                                      double rel_tol,
                                                      double* lambda_min,
                                                      double* lambda_max);

FRACDIFF_API fracdiff_status fracdiff_pencil_m_inner(const fracdiff_pencil* p,
                                                     const double* u, const double* v,
                                                     size_t len, double* out);

/* out = M^{-1} K v */
FRACDIFF_API fracdiff_status fracdiff_pencil_apply(const fracdiff_pencil* p,
                                                   const double* v, size_t len,
                                                   double* out);

/* Solves (K - d M) w = M rhs; d = -INFINITY returns rhs itself. */
FRACDIFF_API fracdiff_status fracdiff_pencil_shifted_solve(const fracdiff_pencil* p,
                                                           double pole,
                                                           const double* rhs, size_t len,
                                                           double* out);

/* ---- pole / snapshot generators ---------------------------------------- */

/* out must hold k+1 snapshots; out[0] = +INFINITY. */
FRACDIFF_API fracdiff_status fracdiff_snapshots_zolotarev(int k, double lambda_min,
                                                          double lambda_max, double* out);
FRACDIFF_API fracdiff_status fracdiff_snapshots_bura(double s, double lambda_min,
                                                     double lambda_max, int k,
                                                     double* out);

/* Weak greedy selection over the default training grid; writes at most k+1
 * snapshots and stores the actual count (early exit shrinks it). */
FRACDIFF_API fracdiff_status fracdiff_snapshots_greedy(const fracdiff_pencil* p,
                                                       const double* b, size_t len,
                                                       int k, double k_star,
                                                       double s_min, double s_max,
                                                       double* out, int* out_len);

/* Truncation indices M_smax, N_smin of the sinc quadrature grid. */
FRACDIFF_API fracdiff_status fracdiff_sinc_params(double k_star, double s_min,
                                                  double s_max, long* m, long* n);

/* ---- solving ------------------------------------------------------------ */

typedef struct {
  double k_star;          /* quadrature step parameter (default 0.15) */
  double s_min;           /* sinc / greedy s-range (default 0.2) */
  double s_max;           /* (default 0.8) */
  double interval_tol;    /* spectrum enclosure accuracy (default 1e-8) */
  int greedy_grid_points; /* training grid size (default 200) */
  double brasil_tol;      /* equioscillation tolerance (default 1e-3) */
  int brasil_max_iter;    /* (default 1000) */
} fracdiff_solve_opts;

FRACDIFF_API void fracdiff_solve_opts_init(fracdiff_solve_opts* opts);

/* method is one of "zolo", "greedy", "bura", "sinc", "gauss", "direct",
 * "dual", "oracle"; k is ignored by "oracle". */
FRACDIFF_API fracdiff_status fracdiff_solve(const fracdiff_pencil* p, const double* b,
                                            size_t len, const char* method, double s,
                                            int k, const fracdiff_solve_opts* opts,
                                            fracdiff_result** out);

FRACDIFF_API void fracdiff_result_free(fracdiff_result* r);
FRACDIFF_API long fracdiff_result_dim(const fracdiff_result* r);
FRACDIFF_API fracdiff_status fracdiff_result_solution(const fracdiff_result* r,
                                                      double* out, size_t len);
FRACDIFF_API int fracdiff_result_space_dim(const fracdiff_result* r); /* k+1 built */
FRACDIFF_API double fracdiff_result_wall_seconds(const fracdiff_result* r);
FRACDIFF_API double fracdiff_result_build_seconds(const fracdiff_result* r);
FRACDIFF_API double fracdiff_result_extract_seconds(const fracdiff_result* r);
FRACDIFF_API size_t fracdiff_result_snapshot_count(const fracdiff_result* r);
FRACDIFF_API fracdiff_status fracdiff_result_snapshots(const fracdiff_result* r,
                                                       double* out, size_t cap);

/* ---- best rational approximation ---------------------------------------- */

FRACDIFF_API fracdiff_status fracdiff_brasil(double s, double lambda_min,
                                             double lambda_max, int k, double tol,
                                             int max_iter, fracdiff_approximant** out);
FRACDIFF_API void fracdiff_approximant_free(fracdiff_approximant* a);
FRACDIFF_API double fracdiff_approximant_max_error(const fracdiff_approximant* a);
FRACDIFF_API double fracdiff_approximant_deviation(const fracdiff_approximant* a);
FRACDIFF_API int fracdiff_approximant_iterations(const fracdiff_approximant* a);
FRACDIFF_API int fracdiff_approximant_degree(const fracdiff_approximant* a);
FRACDIFF_API fracdiff_status fracdiff_approximant_eval(const fracdiff_approximant* a,
                                                       double z, double* out);
FRACDIFF_API size_t fracdiff_approximant_pole_count(const fracdiff_approximant* a);
FRACDIFF_API fracdiff_status fracdiff_approximant_poles(const fracdiff_approximant* a,
                                                        double* out, size_t cap);
FRACDIFF_API fracdiff_status fracdiff_approximant_save(const fracdiff_approximant* a,
                                                       const char* path);
FRACDIFF_API fracdiff_status fracdiff_approximant_load(const char* path,
                                                       fracdiff_approximant** out);

/* ---- convergence rate fitting ------------------------------------------- */

/* Least squares of log(error) over the largest k-window with error in
 * [1e-12, 1e-1]; rate is rho in error ~ A e^{-rho k}, NaN if under two
 * usable points. */
FRACDIFF_API fracdiff_status fracdiff_fit_rate(const int* ks, const double* errors,
                                               size_t len, double* rate,
                                               double* r_squared);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FRACDIFF_H */
