#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "experiments.hpp"
#include "test_util.hpp"

using namespace klab;
using namespace klab::test;

namespace {

bool within_band(double estimate, double theory, double stderr_, double sigmas = 4.0) {
  return std::abs(estimate - theory) <= sigmas * stderr_;
}

}  // namespace

TEST_CASE("metrics on hand-built errors") {
  RngStream rng(400, 0);
  Problem p = gen_synthetic(5, 3, {2.0, 1.0, 0.5}, false, rng);

  // error parallel to a right singular vector
  Vec x1 = p.x_star;
  axpy(0.7, p.svd.right_vector(1), x1);
  CHECK(metric_alignment(x1, p.x_star, p.svd.right_vector(1)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(metric_alignment(x1, p.x_star, p.svd.right_vector(3)) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(metric_rayleigh(p.a, x1, p.x_star) == doctest::Approx(2.0).epsilon(1e-9));

  Vec xr = p.x_star;
  axpy(-1.3, p.svd.right_vector(3), xr);
  CHECK(metric_rayleigh(p.a, xr, p.x_star) == doctest::Approx(0.5).epsilon(1e-9));

  // converged iterate has no defined direction
  CHECK_THROWS_AS(metric_alignment(p.x_star, p.x_star, p.svd.right_vector(1)), Error);
  CHECK_THROWS_AS(metric_rayleigh(p.a, p.x_star, p.x_star), Error);
}

TEST_CASE("trajectory recording cadence and ranges") {
  RngStream rng(401, 0);
  Problem p = gen_synthetic(6, 4, {2.0, 1.0, 0.5, 0.2}, true, rng);

  SolveConfig cfg;
  cfg.max_iters = 40;
  cfg.record_every = 5;
  RngStream run_rng(1, 0);
  SolveRun run = solve_recorded(p, Method::rek, cfg, run_rng, {1, 4});

  REQUIRE(run.traj.ks.size() == 9);  // k = 0, 5, 10, ..., 40
  CHECK(run.traj.ks.front() == 0);
  CHECK(run.traj.ks.back() == 40);
  REQUIRE(run.traj.coeffs.size() == 2);
  REQUIRE(run.traj.coeffs[0].size() == run.traj.ks.size());

  const double s1 = p.svd.sigma[0];
  const double sr = p.svd.sigma_min_pos();
  for (std::size_t i = 0; i < run.traj.ks.size(); ++i) {
    if (run.traj.err_norm[i] <= 1e-12) continue;
    CHECK(run.traj.alignment[i] >= 0.0);
    CHECK(run.traj.alignment[i] <= 1.0 + 1e-12);
    CHECK(run.traj.rayleigh[i] >= sr - 1e-9);
    CHECK(run.traj.rayleigh[i] <= s1 + 1e-9);
  }
}

TEST_CASE("exact start keeps every mean at zero") {
  RngStream rng(402, 0);
  Problem p = gen_synthetic(4, 3, {1.5, 1.0}, false, rng);
  McOptions opts;
  opts.x0 = p.x_star;
  opts.z0 = sub(p.b, matvec(p.a, p.x_star));  // = 0 here
  McResult res = run_monte_carlo(p, {1, 2}, {1, 2, 5}, 200, 7, opts);
  for (const auto& s : res.x_coeff)
    for (std::size_t i = 0; i < s.mean.size(); ++i) {
      CHECK(s.mean[i] == 0.0);
      CHECK(s.stderr_[i] == 0.0);
      CHECK(std::abs(s.theory[i]) <= 1e-12);
    }
}

TEST_CASE("means track the closed forms inside four standard errors") {
  RngStream rng(403, 0);
  Problem p = gen_synthetic(5, 3, {1.2, 0.7}, true, rng);
  McOptions opts;
  opts.track_z = true;
  McResult res = run_monte_carlo(p, {1, 2}, {1, 2, 5, 10}, 4000, 11, opts);

  for (const auto& s : res.x_coeff) {
    for (std::size_t i = 0; i < s.mean.size(); ++i) {
      CAPTURE(s.ell);
      CAPTURE(i);
      CHECK(within_band(s.mean[i], s.theory[i], s.stderr_[i]));
      CHECK(s.stderr_[i] > 0.0);
    }
  }
  for (const auto& s : res.z_coeff)
    for (std::size_t i = 0; i < s.mean.size(); ++i) {
      CAPTURE(s.ell);
      CHECK(within_band(s.mean[i], s.theory[i], s.stderr_[i]));
    }
  for (std::size_t i = 0; i < res.err2.mean.size(); ++i)
    CHECK(res.err2.mean[i] <= res.err2.bound[i] + 4.0 * res.err2.stderr_[i]);
}

TEST_CASE("standard errors shrink like the square root of the trial count") {
  RngStream rng(404, 0);
  Problem p = gen_synthetic(5, 3, {1.2, 0.7}, true, rng);
  McResult small = run_monte_carlo(p, {1}, {5}, 500, 21);
  McResult big = run_monte_carlo(p, {1}, {5}, 2000, 21);
  const double ratio = small.x_coeff[0].stderr_[0] / big.x_coeff[0].stderr_[0];
  CHECK(ratio > 1.5);
  CHECK(ratio < 2.6);
}

TEST_CASE("results are identical across seeds reuse and thread counts") {
  RngStream rng(405, 0);
  Problem p = gen_synthetic(6, 4, {2.0, 1.0, 0.5}, true, rng);

  McOptions serial;
  serial.threads = 1;
  McOptions parallel;
  parallel.threads = 4;

  McResult a = run_monte_carlo(p, {1, 3}, {1, 5, 10}, 1000, 33, serial);
  McResult b = run_monte_carlo(p, {1, 3}, {1, 5, 10}, 1000, 33, parallel);
  McResult c = run_monte_carlo(p, {1, 3}, {1, 5, 10}, 1000, 33, serial);

  for (std::size_t e = 0; e < a.x_coeff.size(); ++e) {
    CHECK(a.x_coeff[e].mean == b.x_coeff[e].mean);
    CHECK(a.x_coeff[e].stderr_ == b.x_coeff[e].stderr_);
    CHECK(a.x_coeff[e].mean == c.x_coeff[e].mean);
  }
  CHECK(a.err2.mean == b.err2.mean);
}

TEST_CASE("plain method matches the geometric curve on consistent systems") {
  RngStream rng(406, 0);
  Problem p = gen_synthetic(6, 4, {2.0, 1.0, 0.5}, false, rng);
  McOptions opts;
  opts.method = Method::rk;
  Vec x0 = p.x_star;
  for (index_t ell = 1; ell <= 3; ++ell) axpy(1.0, p.svd.right_vector(ell), x0);
  opts.x0 = x0;

  McResult res = run_monte_carlo(p, {1, 2, 3}, {1, 2, 5, 10}, 4000, 17, opts);
  for (const auto& s : res.x_coeff) {
    const double rho = decay_factor(p.svd, s.ell);
    for (std::size_t i = 0; i < s.mean.size(); ++i) {
      // theory column already reduces to rho^k * c0 because A^T z = 0
      CHECK(s.theory[i] == doctest::Approx(geom_pow(rho, s.k_grid[i])).epsilon(1e-10));
      CHECK(within_band(s.mean[i], s.theory[i], s.stderr_[i]));
    }
  }
}

TEST_CASE("input validation") {
  RngStream rng(407, 0);
  Problem p = gen_synthetic(4, 3, {1.0, 0.5}, false, rng);
  CHECK_THROWS_AS(run_monte_carlo(p, {1}, {1, 2}, 50, 0), Error);   // too few trials
  CHECK_THROWS_AS(run_monte_carlo(p, {5}, {1, 2}, 200, 0), Error);  // ell out of range
  CHECK_THROWS_AS(run_monte_carlo(p, {}, {1}, 200, 0), Error);
  McOptions bad;
  bad.method = Method::rk;
  bad.track_z = true;
  CHECK_THROWS_AS(run_monte_carlo(p, {1}, {1}, 200, 0, bad), Error);
}
