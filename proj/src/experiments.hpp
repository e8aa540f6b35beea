#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "problem.hpp"
#include "solvers.hpp"
#include "theory.hpp"

namespace klab {

enum class Method { rek, rk };

// Per-iteration diagnostics of a single run. alignment and rayleigh are NaN
// at samples where the error vector has essentially vanished.
struct TrajectoryRecord {
  std::vector<std::uint64_t> ks;
  Vec err_norm;   // ||x_k - x_star||
  Vec alignment;  // |<(x_k - x_star)/||.||, v_r>|
  Vec rayleigh;   // ||A (x_k - x_star)|| / ||x_k - x_star||
  std::vector<index_t> ells;      // tracked 1-based singular indices
  std::vector<Vec> coeffs;        // coeffs[e][i] = <x_k - x_star, v_ells[e]>
};

struct SolveRun {
  RekState state;
  TrajectoryRecord traj;
};

// Runs the chosen method and records diagnostics on the config cadence.
SolveRun solve_recorded(const Problem& p, Method method, const SolveConfig& cfg, RngStream& rng,
                        const std::vector<index_t>& track_ells);

// |<(x - x_star)/||x - x_star||, v>|; fails when the error vector is zero
// ("converged, metric undefined").
double metric_alignment(const Vec& x, const Vec& x_star, const Vec& v);

// ||A (x - x_star)|| / ||x - x_star||; same undefined-at-convergence rule.
double metric_rayleigh(const Matrix& a, const Vec& x, const Vec& x_star);

// Exact E<x_k - x_star, v_ell> for k = 0..k_max by weighted enumeration of
// every (column, row) selection path. Requires (m_eff * n_eff)^k_max <= 1e6
// where m_eff/n_eff count nonzero rows/columns.
Vec enumerate_x_expectation(const Problem& p, const Vec& x0, const Vec& z0, int k_max, index_t ell);

// Exact E<z_k - (b - A x_star), A v_ell> for the column-only chain.
Vec enumerate_z_expectation(const Problem& p, const Vec& z0, int k_max, index_t ell);

// Monte Carlo estimate of the per-direction expectation trajectories, with
// matched theory curves and standard errors.
struct McSummary {
  index_t ell = 0;
  std::vector<std::uint64_t> k_grid;
  Vec mean;
  Vec stderr_;
  Vec theory;
  std::uint64_t trials = 0;
};

struct McErr2Summary {
  std::vector<std::uint64_t> k_grid;
  Vec mean;     // empirical E||x_k - x_star||^2
  Vec stderr_;
  Vec bound;    // error_bound_curve values at the grid
};

struct McOptions {
  Method method = Method::rek;
  std::optional<Vec> x0;  // default 0
  std::optional<Vec> z0;  // default b (ignored by Method::rk)
  bool track_z = false;   // also estimate the z-chain coefficients (rek only)
  int threads = 1;        // 0 = hardware concurrency
};

struct McResult {
  std::vector<McSummary> x_coeff;
  std::vector<McSummary> z_coeff;  // empty unless track_z
  McErr2Summary err2;
  std::uint64_t trials = 0;
};

// Trial t runs with derive_stream(seed, t); aggregation order is fixed, so
// results are identical for any thread count.
McResult run_monte_carlo(const Problem& p, const std::vector<index_t>& ells,
                         const std::vector<std::uint64_t>& k_grid, std::uint64_t trials,
                         std::uint64_t seed, const McOptions& opts = {});

}  // namespace klab
