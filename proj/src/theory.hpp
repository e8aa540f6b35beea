#pragma once

#include <cstdint>

#include "problem.hpp"

namespace klab {

enum class CurveKind { x_coeff, z_coeff, error_bound };

// Predicted trajectory of one expectation quantity over k = 0..K. ell is the
// 1-based singular index (the rank for error_bound curves).
struct TheoryCurve {
  index_t ell = 0;
  CurveKind kind = CurveKind::x_coeff;
  Vec values;
};

// per-direction decay factor 1 - sigma_ell^2 / ||A||_F^2, with the Frobenius
// norm taken from the factorization so curves are a pure function of it
double decay_factor(const Svd& f, index_t ell);

// E<z_k - (b - A x_star), A v_ell> for the column iteration started at z0:
// a plain geometric decay of the initial coefficient.
TheoryCurve z_coeff_curve(const Svd& f, const Problem& p, const Vec& z0, index_t ell, std::uint64_t K);

// E<x_k - x_star, v_ell> for the full method:
//   (k / ||A||_F^2) rho^k <-A^T z0, v_ell> + rho^k <x0 - x_star, v_ell>.
TheoryCurve x_coeff_curve(const Svd& f, const Problem& p, const Vec& x0, const Vec& z0, index_t ell,
                          std::uint64_t K);

// Upper bound on E||x_k - x_star||^2 driven by the smallest positive
// singular value:
//   (k / ||A||_F^2) rho_r^k ||z0 - (b - A x_star)||^2 + rho_r^k ||x0 - x_star||^2.
TheoryCurve error_bound_curve(const Svd& f, const Problem& p, const Vec& x0, const Vec& z0,
                              std::uint64_t K);

// Per-step contraction factor 1 - ||A e||^2 / (||A||_F^2 ||e||^2) for the
// error direction e; lies in [1 - sigma_1^2/||A||_F^2, 1 - sigma_r^2/||A||_F^2]
// for e in range(A^T).
double directional_contraction(const Matrix& a, const Vec& e);

// rho^k and k * rho^k with a log-space fallback so huge k stays finite
double geom_pow(double rho, std::uint64_t k);
double k_geom_pow(double rho, std::uint64_t k);

}  // namespace klab
