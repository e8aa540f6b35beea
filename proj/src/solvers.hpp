#pragma once

#include <cstdint>
#include <functional>

#include "problem.hpp"
#include "sampling.hpp"

namespace klab {

struct RekState {
  Vec x;  // length n
  Vec z;  // length m
  std::uint64_t k = 0;
};

struct SolveConfig {
  std::uint64_t max_iters = 1000;
  // When > 0, stop once both ||A^T z_k|| <= resid_tol * ||A||_F^2 * ||x_k||
  // and ||A x_k - b + z_k|| <= resid_tol * ||A||_F * ||x_k||. The check
  // shares the record_every cadence since it costs two matvecs.
  double resid_tol = 0.0;
  std::uint64_t record_every = 1;
};

// Called with (k, x_k, z_k); z is empty for the plain row-action method.
using Observer = std::function<void(std::uint64_t k, const Vec& x, const Vec& z)>;

// One orthogonal projection of x onto the hyperplane of row i: the returned
// iterate satisfies row i of A x = rhs exactly.
Vec rk_row_step(const Matrix& a, const Vec& rhs, const Vec& x, index_t i);

// One projection of z onto the hyperplane orthogonal to column j; this is
// the row step of the system A^T z = 0.
Vec rk_col_step(const Matrix& a, const Vec& z, index_t j);

// One full iteration: sample a column, project z; then sample a row and
// project x against rhs = b - z using the already-updated z. Consumes
// exactly two RNG draws.
void rek_iterate(RekState& state, const Problem& problem, const DiscreteSampler& rows,
                 const DiscreteSampler& cols, RngStream& rng);

// Full solve from x0 = 0, z0 = b (which satisfy the range preconditions
// trivially). The observer fires at k = 0, on the record_every cadence and
// at the final iterate.
RekState rek_solve(const Problem& problem, const SolveConfig& cfg, RngStream& rng,
                   const Observer& observer = {});

// Same with explicit starts; requires x0 in range(A^T) and z0 in
// b + range(A) (checked via the SVD projectors at entry).
RekState rek_solve_from(const Problem& problem, Vec x0, Vec z0, const SolveConfig& cfg,
                        RngStream& rng, const Observer& observer = {});

// Plain randomized row-action solve (no z iteration, rhs = b). Converges to
// x_star only on consistent systems. One RNG draw per iteration.
Vec rk_solve(const Problem& problem, const SolveConfig& cfg, RngStream& rng,
             const Observer& observer = {});
Vec rk_solve_from(const Problem& problem, Vec x0, const SolveConfig& cfg, RngStream& rng,
                  const Observer& observer = {});

}  // namespace klab
