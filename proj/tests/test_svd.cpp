#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "svd.hpp"
#include "test_util.hpp"

using namespace klab;
using namespace klab::test;

TEST_CASE("diagonal matrix") {
  Svd f = svd(Matrix::from_rows({{2.0, 0.0}, {0.0, 1.0}}));
  REQUIRE(f.sigma.size() == 2);
  CHECK(f.sigma[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.sigma[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.rank == 2);
  // V is the identity up to the sign convention
  CHECK(std::abs(std::abs(f.v(0, 0)) - 1.0) <= 1e-14);
  CHECK(f.v(0, 0) >= 0.0);
  CHECK(f.v(1, 1) >= 0.0);
  CHECK(std::abs(f.v(1, 0)) <= 1e-14);
}

TEST_CASE("zero matrix has rank 0") {
  Svd f = svd(Matrix(3, 2));
  CHECK(f.sigma == Vec{0.0, 0.0});
  CHECK(f.rank == 0);
  CHECK(ortho_defect(f.u) <= 1e-12);
  CHECK(ortho_defect(f.v) <= 1e-12);
  CHECK_THROWS_AS(f.sigma_min_pos(), Error);
}

TEST_CASE("non-finite entries are rejected") {
  Matrix a = Matrix::from_rows({{1.0, 2.0}});
  a(0, 0) = std::nan("");
  CHECK_THROWS_AS(svd(a), Error);
}

TEST_CASE("factorization invariants across shapes and ranks") {
  struct Case {
    index_t m, n;
    Vec spectrum;
  };
  const Case cases[] = {
      {1, 1, {2.5}},
      {2, 2, {1.0, 1.0}},           // repeated singular value
      {3, 2, {2.0, 0.5}},
      {2, 3, {1.5, 0.25}},
      {5, 4, {3.0, 1.0, 0.1, 0.0}},  // rank deficient
      {4, 5, {2.0, 1.0, 0.5, 0.0}},
      {8, 3, {4.0, 2.0, 1.0}},
      {3, 8, {4.0, 2.0, 1.0}},
      {10, 7, {5.0, 2.0, 1.0, 0.3}},  // implicit zeros beyond the list
      {7, 10, {5.0, 2.0, 1e-6}},      // wide range
  };

  RngStream rng(2024, 0);
  for (const auto& c : cases) {
    CAPTURE(c.m);
    CAPTURE(c.n);
    SpectralInstance inst = make_from_spectrum(c.m, c.n, c.spectrum, rng);
    REQUIRE(ortho_defect(inst.u) <= 1e-12);  // construction is trustworthy
    REQUIRE(ortho_defect(inst.v) <= 1e-12);

    Svd f = svd(inst.a);
    const double anorm = frobenius_norm(inst.a);

    CHECK(ortho_defect(f.u) <= 1e-10);
    CHECK(ortho_defect(f.v) <= 1e-10);
    CHECK(max_abs_diff(reconstruct(f.u, f.sigma, f.v), inst.a) <= 1e-10 * std::max(1.0, anorm));

    // nonincreasing and matching the prescribed spectrum
    REQUIRE(f.sigma.size() == static_cast<std::size_t>(std::min(c.m, c.n)));
    for (std::size_t i = 0; i + 1 < f.sigma.size(); ++i) CHECK(f.sigma[i] >= f.sigma[i + 1]);
    for (std::size_t i = 0; i < f.sigma.size(); ++i) {
      const double want = i < c.spectrum.size() ? c.spectrum[i] : 0.0;
      CHECK(std::abs(f.sigma[i] - want) <= 1e-10 * std::max(1.0, c.spectrum[0]));
    }

    index_t want_rank = 0;
    for (double s : c.spectrum)
      if (s > 0.0) ++want_rank;
    CHECK(f.rank == want_rank);

    // Parseval: frobenius^2 == sum of squared singular values
    CHECK(std::abs(anorm * anorm - f.frob_sq()) <= 1e-10 * anorm * anorm);

    // sign convention: first entry of largest magnitude is nonnegative
    for (index_t j = 0; j < f.v.cols(); ++j) {
      index_t arg = 0;
      for (index_t i = 1; i < f.v.rows(); ++i)
        if (std::abs(f.v(i, j)) > std::abs(f.v(arg, j))) arg = i;
      CHECK(f.v(arg, j) >= 0.0);
    }
  }
}

TEST_CASE("svd is deterministic") {
  RngStream rng(7, 7);
  SpectralInstance inst = make_from_spectrum(6, 4, {2.0, 1.0, 0.5, 0.1}, rng);
  Svd f1 = svd(inst.a);
  Svd f2 = svd(inst.a);
  CHECK(f1.sigma == f2.sigma);
  CHECK(f1.u.entries() == f2.u.entries());
  CHECK(f1.v.entries() == f2.v.entries());
}

TEST_CASE("rank tolerance is configurable") {
  // gap engineered around the default threshold
  Matrix a = Matrix::from_rows({{1.0, 0.0}, {0.0, 1e-13}});
  Svd strict = svd(a);           // 1e-13 > 2 * eps * sigma_max -> rank 2
  CHECK(strict.rank == 2);
  Svd loose = svd(a, 1e4);       // raised tolerance truncates it
  CHECK(loose.rank == 1);
}

TEST_CASE("min_norm_lsq on simple systems") {
  Svd f = svd(Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}));
  CHECK(f.rank == 1);
  Vec x = min_norm_lsq(f, Vec{2.0, 3.0});
  CHECK(std::abs(x[0] - 2.0) <= 1e-14);
  CHECK(std::abs(x[1]) <= 1e-14);

  Svd id = svd(Matrix::identity(2));
  Vec xi = min_norm_lsq(id, Vec{5.0, -1.0});
  CHECK(std::abs(xi[0] - 5.0) <= 1e-14);
  CHECK(std::abs(xi[1] + 1.0) <= 1e-14);

  Svd zero = svd(Matrix(2, 2));
  CHECK(min_norm_lsq(zero, Vec{1.0, 1.0}) == Vec{0.0, 0.0});
}

TEST_CASE("min_norm_lsq agrees with the construction pseudoinverse") {
  RngStream rng(31, 0);
  SpectralInstance inst = make_from_spectrum(6, 4, {2.0, 1.0, 0.25}, rng);
  Vec b(6);
  for (auto& v : b) v = rng.next_gaussian();

  // ground truth from the independently built factors
  Vec expect(4, 0.0);
  for (index_t ell = 0; ell < 3; ++ell) {
    double ub = 0.0;
    for (index_t i = 0; i < 6; ++i) ub += inst.u(i, ell) * b[static_cast<std::size_t>(i)];
    for (index_t j = 0; j < 4; ++j)
      expect[static_cast<std::size_t>(j)] += ub / inst.spectrum[static_cast<std::size_t>(ell)] * inst.v(j, ell);
  }

  Svd f = svd(inst.a);
  Vec x = min_norm_lsq(f, b);
  CHECK(nrm2(sub(x, expect)) <= 1e-8);

  // normal equations hold: A^T (A x - b) = 0
  Vec r = sub(matvec(inst.a, x), b);
  CHECK(max_abs(matvec_t(inst.a, r)) <= 1e-8);

  // minimal norm: orthogonal to the null-space basis from the construction
  const Vec null_vec = inst.v.col(3);
  CHECK(std::abs(dot(x, null_vec)) <= 1e-8);
}

TEST_CASE("project_null_t basics") {
  Svd f = svd(Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}));
  Vec r = project_null_t(f, Vec{3.0, 7.0});
  CHECK(std::abs(r[0]) <= 1e-14);
  CHECK(std::abs(r[1] - 7.0) <= 1e-14);

  // y inside range(A) projects to zero
  Vec zero = project_null_t(f, Vec{3.0, 0.0});
  CHECK(nrm2(zero) <= 1e-14);
}

TEST_CASE("project_null_t residual conditions and idempotence") {
  RngStream rng(5, 5);
  SpectralInstance inst = make_from_spectrum(8, 5, {3.0, 2.0, 1.0, 0.5}, rng);
  Svd f = svd(inst.a);
  Vec y(8);
  for (auto& v : y) v = rng.next_gaussian();

  Vec r = project_null_t(f, y);
  CHECK(max_abs(matvec_t(inst.a, r)) <= 1e-10 * frobenius_norm(inst.a) * nrm2(y));

  // y - r lies in range(A): its null component vanishes
  Vec range_part = sub(y, r);
  CHECK(nrm2(project_null_t(f, range_part)) <= 1e-10 * nrm2(y));

  Vec rr = project_null_t(f, r);
  CHECK(nrm2(sub(rr, r)) <= 1e-10 * std::max(1.0, nrm2(r)));
}

TEST_CASE("project_row_space splits x against the row space") {
  RngStream rng(6, 6);
  SpectralInstance inst = make_from_spectrum(4, 6, {2.0, 1.0}, rng);
  Svd f = svd(inst.a);
  Vec x(6);
  for (auto& v : x) v = rng.next_gaussian();
  Vec p = project_row_space(f, x);

  // projection is idempotent and A annihilates the complement
  CHECK(nrm2(sub(project_row_space(f, p), p)) <= 1e-10 * std::max(1.0, nrm2(p)));
  CHECK(nrm2(matvec(inst.a, sub(x, p))) <= 1e-10 * frobenius_norm(inst.a) * nrm2(x));
}
