#include "solvers.hpp"

#include <cmath>

#include "error.hpp"

namespace klab {

namespace {

// in-place x -= ((a_i . x - rhs_i) / ||a_i||^2) a_i^T; the dot accumulates
// before the subtraction so a rhs produced by the same matvec ordering gives
// an exactly-zero residual
void row_project(const Matrix& a, double rhs_i, Vec& x, index_t i, double row_sq) {
  const double* row = a.row_ptr(i);
  double s = 0.0;
  for (index_t j = 0; j < a.cols(); ++j) s += row[j] * x[static_cast<std::size_t>(j)];
  const double coef = (s - rhs_i) / row_sq;
  for (index_t j = 0; j < a.cols(); ++j) x[static_cast<std::size_t>(j)] -= coef * row[j];
}

// in-place z -= ((a_j . z) / ||a_j||^2) a_j
void col_project(const Matrix& a, Vec& z, index_t j, double col_sq) {
  double d = 0.0;
  for (index_t i = 0; i < a.rows(); ++i) d += a(i, j) * z[static_cast<std::size_t>(i)];
  const double coef = d / col_sq;
  for (index_t i = 0; i < a.rows(); ++i) z[static_cast<std::size_t>(i)] -= coef * a(i, j);
}

void check_start(const Problem& p, const Vec& x0, const Vec& z0, bool with_z) {
  if (static_cast<index_t>(x0.size()) != p.n())
    fail(Errc::dimension_mismatch, "solve: x0 length != n");
  const double xd = nrm2(sub(x0, project_row_space(p.svd, x0)));
  if (xd > 1e-8 * nrm2(x0)) fail(Errc::invalid_argument, "solve: x0 is not in range(A^T)");
  if (!with_z) return;
  if (static_cast<index_t>(z0.size()) != p.m())
    fail(Errc::dimension_mismatch, "solve: z0 length != m");
  Vec d = sub(z0, p.b);  // must lie in range(A)
  const double zd = nrm2(project_null_t(p.svd, d));
  if (zd > 1e-8 * nrm2(d)) fail(Errc::invalid_argument, "solve: z0 is not in b + range(A)");
}

bool residuals_small(const Problem& p, const Vec& x, const Vec& z, double tol, double frob) {
  const double xs = nrm2(x);
  const double atz = nrm2(matvec_t(p.a, z));
  if (atz > tol * frob * frob * xs) return false;
  Vec r = matvec(p.a, x);
  for (index_t i = 0; i < p.m(); ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    r[ii] = r[ii] - p.b[ii] + z[ii];
  }
  return nrm2(r) <= tol * frob * xs;
}

}  // namespace

Vec rk_row_step(const Matrix& a, const Vec& rhs, const Vec& x, index_t i) {
  if (i < 0 || i >= a.rows()) fail(Errc::invalid_argument, "rk_row_step: row index out of range");
  if (static_cast<index_t>(rhs.size()) != a.rows() || static_cast<index_t>(x.size()) != a.cols())
    fail(Errc::dimension_mismatch, "rk_row_step: size mismatch");
  const double rsq = row_sq_norm(a, i);
  if (rsq == 0.0) fail(Errc::degenerate, "rk_row_step: zero row");
  Vec out = x;
  row_project(a, rhs[static_cast<std::size_t>(i)], out, i, rsq);
  return out;
}

Vec rk_col_step(const Matrix& a, const Vec& z, index_t j) {
  if (j < 0 || j >= a.cols()) fail(Errc::invalid_argument, "rk_col_step: column index out of range");
  if (static_cast<index_t>(z.size()) != a.rows())
    fail(Errc::dimension_mismatch, "rk_col_step: size mismatch");
  const double csq = col_sq_norm(a, j);
  if (csq == 0.0) fail(Errc::degenerate, "rk_col_step: zero column");
  Vec out = z;
  col_project(a, out, j, csq);
  return out;
}

void rek_iterate(RekState& state, const Problem& problem, const DiscreteSampler& rows,
                 const DiscreteSampler& cols, RngStream& rng) {
  const index_t j = cols.sample(rng);
  col_project(problem.a, state.z, j, cols.weight(j));
  const index_t i = rows.sample(rng);
  const std::size_t ii = static_cast<std::size_t>(i);
  row_project(problem.a, problem.b[ii] - state.z[ii], state.x, i, rows.weight(i));
  ++state.k;
}

RekState rek_solve(const Problem& problem, const SolveConfig& cfg, RngStream& rng,
                   const Observer& observer) {
  return rek_solve_from(problem, Vec(static_cast<std::size_t>(problem.n()), 0.0), problem.b, cfg,
                        rng, observer);
}

RekState rek_solve_from(const Problem& problem, Vec x0, Vec z0, const SolveConfig& cfg,
                        RngStream& rng, const Observer& observer) {
  if (cfg.record_every < 1) fail(Errc::invalid_argument, "solve: record_every must be >= 1");
  check_start(problem, x0, z0, true);

  const DiscreteSampler rows = build_row_sampler(problem.a);
  const DiscreteSampler cols = build_col_sampler(problem.a);
  const double frob = std::sqrt(rows.total());

  RekState state{std::move(x0), std::move(z0), 0};
  std::uint64_t last_recorded = 0;
  if (observer) observer(0, state.x, state.z);

  for (std::uint64_t k = 1; k <= cfg.max_iters; ++k) {
    rek_iterate(state, problem, rows, cols, rng);
    const bool cadence = (k % cfg.record_every == 0) || k == cfg.max_iters;
    if (!cadence) continue;
    if (observer) {
      observer(k, state.x, state.z);
      last_recorded = k;
    }
    if (cfg.resid_tol > 0.0 && residuals_small(problem, state.x, state.z, cfg.resid_tol, frob))
      break;
  }
  if (observer && last_recorded != state.k) observer(state.k, state.x, state.z);
  return state;
}

Vec rk_solve(const Problem& problem, const SolveConfig& cfg, RngStream& rng,
             const Observer& observer) {
  return rk_solve_from(problem, Vec(static_cast<std::size_t>(problem.n()), 0.0), cfg, rng,
                       observer);
}

Vec rk_solve_from(const Problem& problem, Vec x0, const SolveConfig& cfg, RngStream& rng,
                  const Observer& observer) {
  if (cfg.record_every < 1) fail(Errc::invalid_argument, "solve: record_every must be >= 1");
  check_start(problem, x0, {}, false);

  const DiscreteSampler rows = build_row_sampler(problem.a);
  const double frob = std::sqrt(rows.total());

  Vec x = std::move(x0);
  const Vec empty_z;
  std::uint64_t last_recorded = 0;
  if (observer) observer(0, x, empty_z);

  std::uint64_t k = 0;
  for (k = 1; k <= cfg.max_iters; ++k) {
    const index_t i = rows.sample(rng);
    row_project(problem.a, problem.b[static_cast<std::size_t>(i)], x, i, rows.weight(i));
    const bool cadence = (k % cfg.record_every == 0) || k == cfg.max_iters;
    if (!cadence) continue;
    if (observer) {
      observer(k, x, empty_z);
      last_recorded = k;
    }
    if (cfg.resid_tol > 0.0) {
      // consistent-system residual: ||A x - b|| <= tol * ||A||_F * ||x||
      Vec r = matvec(problem.a, x);
      for (index_t i2 = 0; i2 < problem.m(); ++i2)
        r[static_cast<std::size_t>(i2)] -= problem.b[static_cast<std::size_t>(i2)];
      if (nrm2(r) <= cfg.resid_tol * frob * nrm2(x)) break;
    }
  }
  if (observer && last_recorded != std::min<std::uint64_t>(k, cfg.max_iters))
    observer(std::min<std::uint64_t>(k, cfg.max_iters), x, empty_z);
  return x;
}

}  // namespace klab
