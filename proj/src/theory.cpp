#include "theory.hpp"

#include <cmath>

#include "error.hpp"

namespace klab {

namespace {

void check_ell(const Svd& f, index_t ell) {
  if (ell < 1 || ell > f.rank)
    fail(Errc::invalid_argument, "ell must be a 1-based index of a nonzero singular value");
}

// coefficient of v_ell in x (plain inner product; V is orthogonal)
double v_coeff(const Svd& f, const Vec& x, index_t ell) {
  double s = 0.0;
  for (index_t j = 0; j < f.n(); ++j) s += f.v(j, ell - 1) * x[static_cast<std::size_t>(j)];
  return s;
}

}  // namespace

double decay_factor(const Svd& f, index_t ell) {
  check_ell(f, ell);
  const double s = f.sigma[static_cast<std::size_t>(ell - 1)];
  const double rho = 1.0 - s * s / f.frob_sq();
  return rho < 0.0 ? 0.0 : rho;  // clip rounding at the rank-1 corner
}

double geom_pow(double rho, std::uint64_t k) {
  if (k == 0) return 1.0;
  if (rho <= 0.0) return 0.0;
  const double lp = static_cast<double>(k) * std::log(rho);
  if (lp > -700.0) return std::pow(rho, static_cast<double>(k));
  return std::exp(lp);  // underflows to 0 gracefully
}

double k_geom_pow(double rho, std::uint64_t k) {
  if (k == 0 || rho <= 0.0) return 0.0;
  const double lp = static_cast<double>(k) * std::log(rho);
  if (lp > -700.0) return static_cast<double>(k) * std::pow(rho, static_cast<double>(k));
  return std::exp(std::log(static_cast<double>(k)) + lp);
}

TheoryCurve z_coeff_curve(const Svd& f, const Problem& p, const Vec& z0, index_t ell,
                          std::uint64_t K) {
  check_ell(f, ell);
  if (static_cast<index_t>(z0.size()) != p.m()) fail(Errc::dimension_mismatch, "z_coeff_curve: z0 length");

  // c0 = <z0 - (b - A x_star), A v_ell>
  const Vec av = matvec(p.a, f.right_vector(ell));
  Vec d = sub(z0, p.b);
  axpy(1.0, matvec(p.a, p.x_star), d);
  const double c0 = dot(d, av);

  const double rho = decay_factor(f, ell);
  TheoryCurve c{ell, CurveKind::z_coeff, Vec(static_cast<std::size_t>(K) + 1)};
  for (std::uint64_t k = 0; k <= K; ++k) c.values[k] = geom_pow(rho, k) * c0;
  return c;
}

TheoryCurve x_coeff_curve(const Svd& f, const Problem& p, const Vec& x0, const Vec& z0, index_t ell,
                          std::uint64_t K) {
  check_ell(f, ell);
  if (static_cast<index_t>(x0.size()) != p.n() || static_cast<index_t>(z0.size()) != p.m())
    fail(Errc::dimension_mismatch, "x_coeff_curve: start vector length");

  const double frob_sq = f.frob_sq();
  const double rho = decay_factor(f, ell);
  const double c_z = -v_coeff(f, matvec_t(p.a, z0), ell);   // <-A^T z0, v_ell>
  const double c_x = v_coeff(f, x0, ell) - v_coeff(f, p.x_star, ell);

  TheoryCurve c{ell, CurveKind::x_coeff, Vec(static_cast<std::size_t>(K) + 1)};
  for (std::uint64_t k = 0; k <= K; ++k)
    c.values[k] = k_geom_pow(rho, k) * c_z / frob_sq + geom_pow(rho, k) * c_x;
  return c;
}

TheoryCurve error_bound_curve(const Svd& f, const Problem& p, const Vec& x0, const Vec& z0,
                              std::uint64_t K) {
  if (f.rank < 1) fail(Errc::degenerate, "error_bound_curve: rank 0");
  if (static_cast<index_t>(x0.size()) != p.n() || static_cast<index_t>(z0.size()) != p.m())
    fail(Errc::dimension_mismatch, "error_bound_curve: start vector length");

  const double frob_sq = f.frob_sq();
  const double rho = decay_factor(f, f.rank);

  Vec d = sub(z0, p.b);  // z0 - (b - A x_star)
  axpy(1.0, matvec(p.a, p.x_star), d);
  const double zdist_sq = dot(d, d);
  const Vec e0 = sub(x0, p.x_star);
  const double xdist_sq = dot(e0, e0);

  TheoryCurve c{f.rank, CurveKind::error_bound, Vec(static_cast<std::size_t>(K) + 1)};
  for (std::uint64_t k = 0; k <= K; ++k)
    c.values[k] = k_geom_pow(rho, k) * zdist_sq / frob_sq + geom_pow(rho, k) * xdist_sq;
  return c;
}

double directional_contraction(const Matrix& a, const Vec& e) {
  if (static_cast<index_t>(e.size()) != a.cols())
    fail(Errc::dimension_mismatch, "directional_contraction: length");
  const double en = nrm2(e);
  if (en == 0.0) fail(Errc::invalid_argument, "directional_contraction: undefined direction");
  const double fn = frobenius_norm(a);
  const double ae = nrm2(matvec(a, e));
  return 1.0 - (ae * ae) / (fn * fn * en * en);
}

}  // namespace klab
