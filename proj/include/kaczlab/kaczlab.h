/*
 * kaczlab -- randomized extended Kaczmarz laboratory, public C API.
 *
 * Conventions:
 *   - Every fallible call returns a klab_status; KLAB_OK is 0. On failure
 *     klab_last_error() returns a thread-local message for the failing call.
 *   - Handles are opaque and owned by the caller; release them with the
 *     matching *_free function. Freeing NULL is a no-op.
 *   - `ell` parameters are 1-based singular indices into the nonincreasing
 *     singular value sequence of the instance (so ell = rank addresses the
 *     smallest value treated as nonzero).
 *   - Output arrays tagged "kmax+1 values" receive entries for k = 0..kmax.
 *   - All randomness is derived from explicit (seed, stream) pairs; equal
 *     inputs give bit-identical results on every platform and thread count.
 */

#ifndef KACZLAB_H
#define KACZLAB_H

#include <stdint.h>

#if defined(_WIN32)
#  define KLAB_API __declspec(dllexport)
#else
#  define KLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum klab_status {
  KLAB_OK = 0,
  KLAB_ERR_INVALID = 1,     /* bad argument or violated precondition */
  KLAB_ERR_DIMENSION = 2,   /* shape mismatch */
  KLAB_ERR_DEGENERATE = 3,  /* zero matrix / empty null space / rank 0 */
  KLAB_ERR_BUDGET = 4,      /* enumeration path budget exceeded */
  KLAB_ERR_IO = 5,          /* file or directory problem */
  KLAB_ERR_NUMERIC = 6,     /* non-finite data or lost convergence */
  KLAB_ERR_INTERNAL = 7
} klab_status;

typedef enum klab_method {
  KLAB_METHOD_REK = 0,  /* extended method: column step + row step */
  KLAB_METHOD_RK = 1    /* plain row-action method */
} klab_method;

typedef struct klab_problem klab_problem;
typedef struct klab_trajectory klab_trajectory;
typedef struct klab_mc klab_mc;

KLAB_API const char* klab_version(void);
KLAB_API const char* klab_last_error(void);

/* ---- problem instances ------------------------------------------------ */

/* Ill-conditioned demo construction: n x n Gaussian + shift*I, last row
 * replaced by the previous row plus `perturb` on every entry, rows
 * normalized, `zero_rows` zero rows appended; b = A x_star + z with z a
 * unit null(A^T) vector. n >= 3. */
KLAB_API klab_status klab_problem_gen_paper(int64_t n, double shift, double perturb,
                                            int64_t zero_rows, uint64_t seed, klab_problem** out);

/* A = U diag(spectrum) V^T with Haar-random U, V; spectrum nonincreasing,
 * nonnegative, length <= min(m, n). inconsistent != 0 adds a unit null(A^T)
 * component to b and requires rank < m. */
KLAB_API klab_status klab_problem_gen_synthetic(int64_t m, int64_t n, const double* spectrum,
                                                int64_t spectrum_len, int inconsistent,
                                                uint64_t seed, klab_problem** out);

/* Directory layout: A.mtx, b.mtx, xstar.mtx, z.mtx (MatrixMarket array
 * format) plus a key=value manifest.txt. Loading recomputes the SVD and
 * validates the instance invariants. */
KLAB_API klab_status klab_problem_load(const char* dir, klab_problem** out);
KLAB_API klab_status klab_problem_save(const klab_problem* p, const char* dir);
KLAB_API void klab_problem_free(klab_problem* p);

KLAB_API klab_status klab_problem_dims(const klab_problem* p, int64_t* m, int64_t* n);
KLAB_API klab_status klab_problem_rank(const klab_problem* p, int64_t* rank);
KLAB_API klab_status klab_problem_sigma(const klab_problem* p, int64_t ell, double* out);
KLAB_API klab_status klab_problem_frobenius(const klab_problem* p, double* out);
KLAB_API klab_status klab_problem_is_consistent(const klab_problem* p, int* out);

/* ---- solving ----------------------------------------------------------- */

typedef struct klab_solve_config {
  uint64_t max_iters;
  uint64_t record_every;  /* diagnostics cadence, >= 1 */
  double resid_tol;       /* 0 disables early stopping */
} klab_solve_config;

/* Runs from x0 = 0 (and z0 = b for the extended method), recording error
 * norm, alignment with the last nonzero right singular direction, the
 * Rayleigh quotient ||A e||/||e||, and <x_k - x_star, v_ell> for each
 * tracked ell. */
KLAB_API klab_status klab_solve(const klab_problem* p, klab_method method,
                                const klab_solve_config* cfg, uint64_t seed, uint64_t stream,
                                const int64_t* track_ells, int64_t n_track,
                                klab_trajectory** out);
KLAB_API void klab_trajectory_free(klab_trajectory* t);
KLAB_API klab_status klab_trajectory_len(const klab_trajectory* t, int64_t* len);
/* alignment / rayleigh are NaN where the error vector has vanished */
KLAB_API klab_status klab_trajectory_row(const klab_trajectory* t, int64_t i, uint64_t* k,
                                         double* err_norm, double* alignment, double* rayleigh);
KLAB_API klab_status klab_trajectory_coeff(const klab_trajectory* t, int64_t track_idx, int64_t i,
                                           double* out);

/* ---- closed-form expectation curves ------------------------------------ */
/* x0/z0 may be NULL for the defaults x0 = 0, z0 = b. */

/* E<x_k - x_star, v_ell>, kmax+1 values */
KLAB_API klab_status klab_x_coeff_curve(const klab_problem* p, const double* x0, const double* z0,
                                        int64_t ell, uint64_t kmax, double* values);
/* E<z_k - (b - A x_star), A v_ell> for the column chain, kmax+1 values */
KLAB_API klab_status klab_z_coeff_curve(const klab_problem* p, const double* z0, int64_t ell,
                                        uint64_t kmax, double* values);
/* upper bound on E||x_k - x_star||^2, kmax+1 values */
KLAB_API klab_status klab_error_bound_curve(const klab_problem* p, const double* x0,
                                            const double* z0, uint64_t kmax, double* values);
/* 1 - ||A e||^2 / (||A||_F^2 ||e||^2) for a nonzero direction e of length n */
KLAB_API klab_status klab_directional_contraction(const klab_problem* p, const double* e,
                                                  double* out);

/* ---- exact expectation by path enumeration (tiny instances) ------------ */

KLAB_API klab_status klab_enumerate_x(const klab_problem* p, const double* x0, const double* z0,
                                      int64_t kmax, int64_t ell, double* values);
KLAB_API klab_status klab_enumerate_z(const klab_problem* p, const double* z0, int64_t kmax,
                                      int64_t ell, double* values);

/* ---- Monte Carlo verification ------------------------------------------ */

/* trials >= 100; trial t uses the stream derived from (seed, t). track_z
 * also estimates the z-chain coefficients (extended method only). threads:
 * 0 = hardware concurrency; results do not depend on the thread count. */
KLAB_API klab_status klab_monte_carlo(const klab_problem* p, klab_method method,
                                      const int64_t* ells, int64_t n_ells, const uint64_t* k_grid,
                                      int64_t n_k, uint64_t trials, uint64_t seed, int track_z,
                                      int threads, klab_mc** out);
KLAB_API void klab_mc_free(klab_mc* mc);
KLAB_API klab_status klab_mc_grid(const klab_mc* mc, int64_t* n_ells, int64_t* n_k);
KLAB_API klab_status klab_mc_grid_k(const klab_mc* mc, int64_t k_idx, uint64_t* k);
KLAB_API klab_status klab_mc_ell(const klab_mc* mc, int64_t ell_idx, int64_t* ell);
KLAB_API klab_status klab_mc_x_stats(const klab_mc* mc, int64_t ell_idx, int64_t k_idx,
                                     double* mean, double* stderr_out, double* theory);
KLAB_API klab_status klab_mc_z_stats(const klab_mc* mc, int64_t ell_idx, int64_t k_idx,
                                     double* mean, double* stderr_out, double* theory);
KLAB_API klab_status klab_mc_err2_stats(const klab_mc* mc, int64_t k_idx, double* mean,
                                        double* stderr_out, double* bound);

/* ---- figure metrics ----------------------------------------------------- */

/* |<(x - x_star)/||x - x_star||, v_ell>| for an iterate x of length n */
KLAB_API klab_status klab_metric_alignment(const klab_problem* p, const double* x, int64_t ell,
                                           double* out);
/* ||A (x - x_star)|| / ||x - x_star|| */
KLAB_API klab_status klab_metric_rayleigh(const klab_problem* p, const double* x, double* out);

#ifdef __cplusplus
}
#endif

#endif /* KACZLAB_H */
