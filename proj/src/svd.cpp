#include "svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "error.hpp"

namespace klab {

namespace {

constexpr double kConvTol = 1e-14;  // relative off-diagonal threshold
constexpr int kMaxSweeps = 60;

// Column-major working storage: col(j) is contiguous.
struct ColMat {
  index_t rows = 0, cols = 0;
  Vec data;

  ColMat(index_t r, index_t c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
  double* col(index_t j) { return data.data() + static_cast<std::size_t>(j) * rows; }
  const double* col(index_t j) const { return data.data() + static_cast<std::size_t>(j) * rows; }
};

double col_dot(const ColMat& m, index_t a, index_t b) {
  const double* x = m.col(a);
  const double* y = m.col(b);
  double s = 0.0;
  for (index_t i = 0; i < m.rows; ++i) s += x[i] * y[i];
  return s;
}

void rotate_cols(ColMat& m, index_t a, index_t b, double c, double s) {
  double* x = m.col(a);
  double* y = m.col(b);
  for (index_t i = 0; i < m.rows; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

// Orthogonalize the columns of w by plane rotations, accumulating them into
// q (initialized to identity), so that w_final = w_initial * q.
int jacobi_orthogonalize(ColMat& w, ColMat& q) {
  const index_t ncols = w.cols;
  Vec colsq(static_cast<std::size_t>(ncols), 0.0);

  int sweeps = 0;
  bool rotated = true;
  while (rotated && sweeps < kMaxSweeps) {
    rotated = false;
    for (index_t j = 0; j < ncols; ++j) colsq[static_cast<std::size_t>(j)] = col_dot(w, j, j);

    for (index_t a = 0; a + 1 < ncols; ++a) {
      for (index_t b = a + 1; b < ncols; ++b) {
        const double alpha = colsq[static_cast<std::size_t>(a)];
        const double beta = colsq[static_cast<std::size_t>(b)];
        if (alpha == 0.0 || beta == 0.0) continue;
        const double gamma = col_dot(w, a, b);
        if (std::abs(gamma) <= kConvTol * std::sqrt(alpha * beta)) continue;

        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        rotate_cols(w, a, b, c, s);
        rotate_cols(q, a, b, c, s);
        colsq[static_cast<std::size_t>(a)] = c * c * alpha - 2.0 * c * s * gamma + s * s * beta;
        colsq[static_cast<std::size_t>(b)] = s * s * alpha + 2.0 * c * s * gamma + c * c * beta;
        rotated = true;
      }
    }
    ++sweeps;
  }
  return sweeps;
}

// Fill the unset columns of l (p x p, column-major, `filled` marks the set
// ones) with an orthonormal completion. Candidates are unit basis vectors,
// picked by largest residual; residual norms are tracked incrementally via
// the rows of the filled columns.
void complete_basis(ColMat& l, std::vector<char>& filled) {
  const index_t p = l.rows;
  Vec rowsq(static_cast<std::size_t>(p), 0.0);
  for (index_t j = 0; j < p; ++j) {
    if (!filled[static_cast<std::size_t>(j)]) continue;
    const double* u = l.col(j);
    for (index_t i = 0; i < p; ++i) rowsq[static_cast<std::size_t>(i)] += u[i] * u[i];
  }

  for (index_t j = 0; j < p; ++j) {
    if (filled[static_cast<std::size_t>(j)]) continue;

    index_t cand = 0;
    for (index_t i = 1; i < p; ++i)
      if (rowsq[static_cast<std::size_t>(i)] < rowsq[static_cast<std::size_t>(cand)]) cand = i;

    Vec v(static_cast<std::size_t>(p), 0.0);
    v[static_cast<std::size_t>(cand)] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {  // double Gram-Schmidt
      for (index_t jj = 0; jj < p; ++jj) {
        if (!filled[static_cast<std::size_t>(jj)]) continue;
        const double* u = l.col(jj);
        double d = 0.0;
        for (index_t i = 0; i < p; ++i) d += u[i] * v[static_cast<std::size_t>(i)];
        for (index_t i = 0; i < p; ++i) v[static_cast<std::size_t>(i)] -= d * u[i];
      }
    }
    const double vn = nrm2(v);
    if (!(vn > 0.0)) fail(Errc::numeric, "svd: basis completion failed");
    double* dst = l.col(j);
    for (index_t i = 0; i < p; ++i) {
      dst[i] = v[static_cast<std::size_t>(i)] / vn;
      rowsq[static_cast<std::size_t>(i)] += dst[i] * dst[i];
    }
    filled[static_cast<std::size_t>(j)] = 1;
  }
}

Matrix to_row_major(const ColMat& m) {
  Matrix out(m.rows, m.cols);
  for (index_t j = 0; j < m.cols; ++j) {
    const double* c = m.col(j);
    for (index_t i = 0; i < m.rows; ++i) out(i, j) = c[i];
  }
  return out;
}

void flip_column(Matrix& m, index_t j) {
  for (index_t i = 0; i < m.rows(); ++i) m(i, j) = -m(i, j);
}

}  // namespace

double Svd::sigma_min_pos() const {
  if (rank < 1) fail(Errc::degenerate, "svd: rank 0 has no nonzero singular value");
  return sigma[static_cast<std::size_t>(rank - 1)];
}

double Svd::frob_sq() const {
  double s = 0.0;
  for (double x : sigma) s += x * x;
  return s;
}

Svd svd(const Matrix& a, double rank_tol_factor) {
  const index_t m = a.rows();
  const index_t n = a.cols();
  if (m < 1 || n < 1) fail(Errc::invalid_argument, "svd: empty matrix");
  if (!a.all_finite()) fail(Errc::numeric, "svd: non-finite entries");
  if (!(rank_tol_factor >= 0.0)) fail(Errc::invalid_argument, "svd: negative rank_tol_factor");

  const bool transposed = m < n;  // work on the taller orientation
  const index_t p = transposed ? n : m;
  const index_t q = transposed ? m : n;

  ColMat w(p, q);
  for (index_t j = 0; j < q; ++j) {
    double* c = w.col(j);
    for (index_t i = 0; i < p; ++i) c[i] = transposed ? a(j, i) : a(i, j);
  }
  ColMat qacc(q, q);
  for (index_t j = 0; j < q; ++j) qacc.col(j)[j] = 1.0;

  const int sweeps = jacobi_orthogonalize(w, qacc);

  // singular values from the final column norms, sorted nonincreasing
  Vec sig(static_cast<std::size_t>(q), 0.0);
  for (index_t j = 0; j < q; ++j) sig[static_cast<std::size_t>(j)] = std::sqrt(col_dot(w, j, j));

  std::vector<index_t> order(static_cast<std::size_t>(q));
  std::iota(order.begin(), order.end(), index_t{0});
  std::stable_sort(order.begin(), order.end(), [&](index_t i, index_t j) {
    return sig[static_cast<std::size_t>(i)] > sig[static_cast<std::size_t>(j)];
  });

  ColMat ws(p, q), qs(q, q);
  Vec sigma(static_cast<std::size_t>(q));
  for (index_t j = 0; j < q; ++j) {
    const index_t src = order[static_cast<std::size_t>(j)];
    sigma[static_cast<std::size_t>(j)] = sig[static_cast<std::size_t>(src)];
    std::copy(w.col(src), w.col(src) + p, ws.col(j));
    std::copy(qacc.col(src), qacc.col(src) + q, qs.col(j));
  }

  const double eps = std::numeric_limits<double>::epsilon();
  const double smax = sigma.empty() ? 0.0 : sigma[0];
  const double split = smax * static_cast<double>(std::max(m, n)) * eps;

  // Left factor: normalized columns where sigma is meaningful, deterministic
  // orthonormal completion elsewhere (and for the p - q extension columns).
  ColMat l(p, p);
  std::vector<char> filled(static_cast<std::size_t>(p), 0);
  for (index_t j = 0; j < q; ++j) {
    if (sigma[static_cast<std::size_t>(j)] <= split) continue;
    const double inv = 1.0 / sigma[static_cast<std::size_t>(j)];
    const double* srcc = ws.col(j);
    double* dst = l.col(j);
    for (index_t i = 0; i < p; ++i) dst[i] = srcc[i] * inv;
    filled[static_cast<std::size_t>(j)] = 1;
  }
  complete_basis(l, filled);

  Svd f;
  f.sigma = std::move(sigma);
  f.sweeps = sweeps;
  if (!transposed) {
    f.u = to_row_major(l);
    f.v = to_row_major(qs);
  } else {
    f.u = to_row_major(qs);
    f.v = to_row_major(l);
  }

  // sign convention on V's columns; paired U column flips with it
  const index_t minmn = std::min(m, n);
  for (index_t j = 0; j < n; ++j) {
    index_t arg = 0;
    double best = std::abs(f.v(0, j));
    for (index_t i = 1; i < n; ++i) {
      const double mag = std::abs(f.v(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (f.v(arg, j) < 0.0) {
      flip_column(f.v, j);
      if (j < minmn) flip_column(f.u, j);
    }
  }

  f.rank_tol = rank_tol_factor * smax * static_cast<double>(std::max(m, n)) * eps;
  f.rank = 0;
  for (double s : f.sigma)
    if (s > f.rank_tol) ++f.rank;
  return f;
}

Vec min_norm_lsq(const Svd& f, const Vec& b) {
  if (static_cast<index_t>(b.size()) != f.m()) fail(Errc::dimension_mismatch, "min_norm_lsq: rhs length");
  Vec x(static_cast<std::size_t>(f.n()), 0.0);
  for (index_t ell = 0; ell < f.rank; ++ell) {
    double ub = 0.0;
    for (index_t i = 0; i < f.m(); ++i) ub += f.u(i, ell) * b[static_cast<std::size_t>(i)];
    const double coef = ub / f.sigma[static_cast<std::size_t>(ell)];
    for (index_t j = 0; j < f.n(); ++j) x[static_cast<std::size_t>(j)] += coef * f.v(j, ell);
  }
  return x;
}

Vec project_null_t(const Svd& f, const Vec& y) {
  if (static_cast<index_t>(y.size()) != f.m()) fail(Errc::dimension_mismatch, "project_null_t: length");
  Vec r = y;
  for (index_t ell = 0; ell < f.rank; ++ell) {
    double uy = 0.0;
    for (index_t i = 0; i < f.m(); ++i) uy += f.u(i, ell) * y[static_cast<std::size_t>(i)];
    for (index_t i = 0; i < f.m(); ++i) r[static_cast<std::size_t>(i)] -= uy * f.u(i, ell);
  }
  return r;
}

Vec project_row_space(const Svd& f, const Vec& x) {
  if (static_cast<index_t>(x.size()) != f.n()) fail(Errc::dimension_mismatch, "project_row_space: length");
  Vec r(static_cast<std::size_t>(f.n()), 0.0);
  for (index_t ell = 0; ell < f.rank; ++ell) {
    double vx = 0.0;
    for (index_t j = 0; j < f.n(); ++j) vx += f.v(j, ell) * x[static_cast<std::size_t>(j)];
    for (index_t j = 0; j < f.n(); ++j) r[static_cast<std::size_t>(j)] += vx * f.v(j, ell);
  }
  return r;
}

}  // namespace klab
