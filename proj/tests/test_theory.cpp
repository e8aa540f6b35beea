#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "test_util.hpp"
#include "theory.hpp"

using namespace klab;
using namespace klab::test;

namespace {

Problem synthetic(index_t m, index_t n, Vec spectrum, bool inconsistent, std::uint64_t seed) {
  RngStream rng(seed, 0);
  return gen_synthetic(m, n, spectrum, inconsistent, rng);
}

}  // namespace

TEST_CASE("decay factor at the spectral extremes") {
  Problem p = synthetic(5, 3, {2.0, 1.0, 0.5}, false, 1);
  const double fsq = p.svd.frob_sq();
  CHECK(decay_factor(p.svd, 1) == doctest::Approx(1.0 - 4.0 / fsq).epsilon(1e-12));
  CHECK(decay_factor(p.svd, 3) == doctest::Approx(1.0 - 0.25 / fsq).epsilon(1e-12));
  CHECK_THROWS_AS(decay_factor(p.svd, 0), Error);
  CHECK_THROWS_AS(decay_factor(p.svd, 4), Error);
}

TEST_CASE("directional contraction matches the extremes and stays inside them") {
  Problem p = synthetic(6, 4, {2.0, 1.0, 0.5, 0.2}, false, 2);
  const double lo = decay_factor(p.svd, 1);   // fastest contraction
  const double hi = decay_factor(p.svd, 4);   // slowest

  CHECK(directional_contraction(p.a, p.svd.right_vector(1)) == doctest::Approx(lo).epsilon(1e-10));
  CHECK(directional_contraction(p.a, p.svd.right_vector(4)) == doctest::Approx(hi).epsilon(1e-10));

  RngStream rng(3, 0);
  for (int rep = 0; rep < 20; ++rep) {
    Vec g(static_cast<std::size_t>(p.n()));
    for (auto& v : g) v = rng.next_gaussian();
    Vec e = project_row_space(p.svd, g);
    const double f = directional_contraction(p.a, e);
    CHECK(f >= lo - 1e-10);
    CHECK(f <= hi + 1e-10);
  }

  CHECK_THROWS_AS(directional_contraction(p.a, Vec(4, 0.0)), Error);
}

TEST_CASE("z curve vanishes when started at the residual and returns c0 at k = 0") {
  Problem p = synthetic(5, 3, {1.5, 1.0, 0.5}, true, 4);
  Vec resid = sub(p.b, matvec(p.a, p.x_star));  // = z

  TheoryCurve zero = z_coeff_curve(p.svd, p, resid, 1, 10);
  for (double v : zero.values) CHECK(std::abs(v) <= 1e-12);

  TheoryCurve c = z_coeff_curve(p.svd, p, p.b, 2, 10);
  const Vec av = matvec(p.a, p.svd.right_vector(2));
  Vec d = sub(p.b, resid);
  const double c0 = dot(d, av);
  CHECK(c.values[0] == doctest::Approx(c0).epsilon(1e-13));
  // plain geometric decay
  const double rho = decay_factor(p.svd, 2);
  CHECK(c.values[3] == doctest::Approx(c0 * rho * rho * rho).epsilon(1e-12));
}

TEST_CASE("x curve degenerate cases") {
  Problem p = synthetic(5, 3, {1.5, 1.0, 0.5}, true, 5);

  // x0 = x_star and A^T z0 = 0 kills both terms
  TheoryCurve zero = x_coeff_curve(p.svd, p, p.x_star, p.z, 1, 20);
  for (double v : zero.values) CHECK(std::abs(v) <= 1e-12);

  // k = 0 value is the initial coefficient
  Vec x0(3, 0.0);
  TheoryCurve c = x_coeff_curve(p.svd, p, x0, p.b, 2, 5);
  const double want = -dot(p.x_star, p.svd.right_vector(2));
  CHECK(c.values[0] == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("rank-1 system contracts in one expected step") {
  Problem p = synthetic(2, 2, {1.7}, false, 6);
  CHECK(decay_factor(p.svd, 1) <= 1e-12);  // sigma_1^2 == frob^2
  Vec x0(2, 0.0);
  TheoryCurve c = x_coeff_curve(p.svd, p, x0, p.b, 1, 4);
  for (std::size_t k = 1; k < c.values.size(); ++k) CHECK(std::abs(c.values[k]) <= 1e-12);
}

TEST_CASE("x curve with null-space z0 reduces to pure geometric decay") {
  Problem p = synthetic(6, 3, {2.0, 1.2, 0.3}, true, 7);
  Vec x0 = p.svd.right_vector(1);  // in range(A^T)
  axpy(0.5, p.svd.right_vector(3), x0);

  for (index_t ell = 1; ell <= 3; ++ell) {
    const double rho = decay_factor(p.svd, ell);
    const double c0 = dot(sub(x0, p.x_star), p.svd.right_vector(ell));
    TheoryCurve c = x_coeff_curve(p.svd, p, x0, p.z, ell, 12);  // A^T z = 0
    for (std::size_t k = 0; k < c.values.size(); ++k)
      CHECK(std::abs(c.values[k] - c0 * geom_pow(rho, k)) <= 1e-12 * std::max(1.0, std::abs(c0)));
  }
}

TEST_CASE("rate ordering: larger singular values decay faster") {
  Problem p = synthetic(6, 4, {2.0, 1.0, 0.5, 0.1}, false, 8);
  // normalized curves with the pure-decay setup are exactly rho^k
  Vec x0 = p.x_star;
  for (index_t ell = 1; ell <= 4; ++ell) axpy(1.0, p.svd.right_vector(ell), x0);

  for (std::uint64_t k = 1; k <= 10; ++k) {
    double prev = -1.0;
    for (index_t ell = 1; ell <= 4; ++ell) {
      TheoryCurve c = x_coeff_curve(p.svd, p, x0, p.z, ell, k);
      const double normalized = std::abs(c.values[k] / c.values[0]);
      CHECK(normalized >= prev - 1e-13);  // nondecreasing in ell
      prev = normalized;
    }
  }
}

TEST_CASE("error bound curve basics") {
  Problem p = synthetic(5, 3, {2.0, 1.0, 0.5}, true, 9);

  // exact start: identically zero
  Vec resid = sub(p.b, matvec(p.a, p.x_star));
  TheoryCurve zero = error_bound_curve(p.svd, p, p.x_star, resid, 10);
  for (double v : zero.values) CHECK(std::abs(v) <= 1e-12);

  Vec x0(3, 0.0);
  TheoryCurve c = error_bound_curve(p.svd, p, x0, p.b, 10);
  const double e0 = nrm2(p.x_star);
  CHECK(c.values[0] == doctest::Approx(e0 * e0).epsilon(1e-12));
  for (double v : c.values) CHECK(v >= 0.0);
}

TEST_CASE("error bound is monotone in the smallest positive singular value") {
  Problem p = synthetic(6, 4, {2.0, 1.0, 0.5, 0.2}, true, 10);
  Vec x0(4, 0.0);

  // sweep sigma_r upward on copies of the factorization; with the initial
  // distances held fixed the bound must never increase
  Vec prev;
  for (double sr : {0.05, 0.2, 0.5, 0.9}) {
    Svd variant = p.svd;
    variant.sigma[static_cast<std::size_t>(variant.rank - 1)] = sr;
    TheoryCurve c = error_bound_curve(variant, p, x0, p.b, 30);
    if (!prev.empty())
      for (std::size_t k = 1; k < c.values.size(); ++k) CHECK(c.values[k] <= prev[k] * (1.0 + 1e-12));
    prev = c.values;
  }
}

TEST_CASE("curves decay to nothing at large k") {
  Problem p = synthetic(5, 3, {2.0, 1.0, 0.5}, true, 11);
  Vec x0 = p.x_star;
  for (index_t ell = 1; ell <= 3; ++ell) axpy(1.0, p.svd.right_vector(ell), x0);

  for (index_t ell = 1; ell <= 3; ++ell) {
    TheoryCurve c = x_coeff_curve(p.svd, p, x0, p.b, ell, 10000);
    const double c0 = std::abs(dot(sub(x0, p.x_star), p.svd.right_vector(ell)));
    CHECK(std::abs(c.values[10000]) < 1e-8 * c0);
    TheoryCurve zc = z_coeff_curve(p.svd, p, p.b, ell, 10000);
    CHECK(std::abs(zc.values[10000]) < 1e-8 * std::max(1.0, std::abs(zc.values[0])));
  }

  TheoryCurve bound = error_bound_curve(p.svd, p, x0, p.b, 10000);
  CHECK(bound.values[10000] < 1e-8 * std::max(1.0, bound.values[0]));
}

TEST_CASE("log-safe evaluation survives huge iteration counts") {
  // a nearly flat factor: sigma_r = 1e-4 against frob^2 ~ 1, as in the
  // ill-conditioned construction
  Problem p = synthetic(3, 2, {1.0, 1e-4}, false, 12);
  const double rho = decay_factor(p.svd, 2);
  CHECK(rho == doctest::Approx(1.0 - 1e-8 / (1.0 + 1e-8)).epsilon(1e-10));

  Vec x0 = p.x_star;
  axpy(1.0, p.svd.right_vector(2), x0);
  TheoryCurve c = x_coeff_curve(p.svd, p, x0, p.b, 2, 1000000);
  for (std::uint64_t k : {std::uint64_t{1000}, std::uint64_t{100000}, std::uint64_t{1000000}}) {
    CHECK(std::isfinite(c.values[k]));
    CHECK(std::abs(c.values[k]) > 0.0);  // not flushed to zero
  }
}

TEST_CASE("geometric helpers agree across the log-space switchover") {
  // k log(rho) crosses -700 between these two exponents
  const double rho = 0.5;
  const std::uint64_t k_lo = 1005, k_hi = 1015;
  const double lo = geom_pow(rho, k_lo);
  const double hi = geom_pow(rho, k_hi);
  CHECK(lo > 0.0);
  CHECK(hi > 0.0);
  CHECK(lo / hi == doctest::Approx(1024.0).epsilon(1e-9));  // 2^10

  CHECK(k_geom_pow(rho, 0) == 0.0);
  CHECK(geom_pow(rho, 0) == 1.0);
  CHECK(geom_pow(0.0, 5) == 0.0);
  CHECK(k_geom_pow(0.9999, 10) == doctest::Approx(10.0 * std::pow(0.9999, 10.0)).epsilon(1e-12));
}
