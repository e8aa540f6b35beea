#pragma once

#include "matrix.hpp"

namespace klab {

// Full singular value decomposition A = U * diag(sigma) * V^T with U (m x m)
// and V (n x n) orthogonal and sigma nonincreasing. Columns of V follow a
// fixed sign convention: the entry of largest magnitude in each column is
// nonnegative (ties broken by lowest index), with the paired U column
// flipped alongside so the product is unchanged.
struct Svd {
  Matrix u;
  Vec sigma;  // length min(m, n)
  Matrix v;
  index_t rank = 0;      // count of sigma[i] > rank_tol
  double rank_tol = 0.0;
  int sweeps = 0;        // Jacobi sweeps spent

  index_t m() const { return u.rows(); }
  index_t n() const { return v.rows(); }

  // smallest singular value treated as nonzero (sigma_r); requires rank >= 1
  double sigma_min_pos() const;

  // 1-based singular index accessors, ell in [1, min(m, n)]
  Vec left_vector(index_t ell) const { return u.col(ell - 1); }
  Vec right_vector(index_t ell) const { return v.col(ell - 1); }

  double frob_sq() const;  // sum of squared singular values
};

// One-sided Jacobi on the taller orientation (the input is transposed when
// m < n). Deterministic for fixed input; fails on non-finite entries.
// rank_tol = rank_tol_factor * sigma[0] * max(m, n) * machine epsilon.
Svd svd(const Matrix& a, double rank_tol_factor = 1.0);

// minimum 2-norm least squares solution x = pinv(A) b; zero vector at rank 0
Vec min_norm_lsq(const Svd& f, const Vec& b);

// component of y orthogonal to range(A), i.e. the projection onto null(A^T)
Vec project_null_t(const Svd& f, const Vec& y);

// component of x inside range(A^T)
Vec project_row_space(const Svd& f, const Vec& x);

}  // namespace klab
