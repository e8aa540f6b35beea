#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "error.hpp"

namespace klab {

namespace {

constexpr double kConvergedTol = 1e-12;

std::vector<index_t> nonzero_rows(const Matrix& a) {
  std::vector<index_t> out;
  for (index_t i = 0; i < a.rows(); ++i)
    if (row_sq_norm(a, i) > 0.0) out.push_back(i);
  return out;
}

std::vector<index_t> nonzero_cols(const Matrix& a) {
  std::vector<index_t> out;
  for (index_t j = 0; j < a.cols(); ++j)
    if (col_sq_norm(a, j) > 0.0) out.push_back(j);
  return out;
}

void check_budget(std::size_t m_eff, std::size_t n_eff, int k_max) {
  if (k_max < 0) fail(Errc::invalid_argument, "enumerate: negative k_max");
  const double branch = static_cast<double>(m_eff) * static_cast<double>(n_eff);
  const double paths = std::pow(std::max(branch, 1.0), k_max);
  if (paths > 1e6) {
    std::ostringstream os;
    os << "enumerate: path budget exceeded, needs " << paths << " > 1e6 paths";
    fail(Errc::budget_exceeded, os.str());
  }
}

}  // namespace

double metric_alignment(const Vec& x, const Vec& x_star, const Vec& v) {
  const Vec e = sub(x, x_star);
  const double en = nrm2(e);
  if (en <= kConvergedTol) fail(Errc::degenerate, "metric_alignment: converged, metric undefined");
  return std::abs(dot(e, v)) / en;
}

double metric_rayleigh(const Matrix& a, const Vec& x, const Vec& x_star) {
  const Vec e = sub(x, x_star);
  const double en = nrm2(e);
  if (en <= kConvergedTol) fail(Errc::degenerate, "metric_rayleigh: converged, metric undefined");
  return nrm2(matvec(a, e)) / en;
}

SolveRun solve_recorded(const Problem& p, Method method, const SolveConfig& cfg, RngStream& rng,
                        const std::vector<index_t>& track_ells) {
  for (index_t ell : track_ells)
    if (ell < 1 || ell > p.svd.rank)
      fail(Errc::invalid_argument, "solve_recorded: tracked ell out of range");
  if (p.svd.rank < 1) fail(Errc::degenerate, "solve_recorded: rank-0 system");

  const Vec v_r = p.svd.right_vector(p.svd.rank);
  std::vector<Vec> v_tracked;
  v_tracked.reserve(track_ells.size());
  for (index_t ell : track_ells) v_tracked.push_back(p.svd.right_vector(ell));

  SolveRun run;
  run.traj.ells = track_ells;
  run.traj.coeffs.resize(track_ells.size());

  const double nan = std::numeric_limits<double>::quiet_NaN();
  Observer obs = [&](std::uint64_t k, const Vec& x, const Vec&) {
    const Vec e = sub(x, p.x_star);
    const double en = nrm2(e);
    run.traj.ks.push_back(k);
    run.traj.err_norm.push_back(en);
    if (en <= kConvergedTol) {
      run.traj.alignment.push_back(nan);
      run.traj.rayleigh.push_back(nan);
    } else {
      run.traj.alignment.push_back(std::abs(dot(e, v_r)) / en);
      run.traj.rayleigh.push_back(nrm2(matvec(p.a, e)) / en);
    }
    for (std::size_t t = 0; t < v_tracked.size(); ++t)
      run.traj.coeffs[t].push_back(dot(e, v_tracked[t]));
  };

  if (method == Method::rek) {
    run.state = rek_solve(p, cfg, rng, obs);
  } else {
    Vec x = rk_solve(p, cfg, rng, obs);
    run.state.x = std::move(x);
    run.state.z = Vec();
    run.state.k = run.traj.ks.empty() ? 0 : run.traj.ks.back();
  }
  return run;
}

Vec enumerate_x_expectation(const Problem& p, const Vec& x0, const Vec& z0, int k_max, index_t ell) {
  if (ell < 1 || ell > p.svd.rank) fail(Errc::invalid_argument, "enumerate: ell out of range");
  if (static_cast<index_t>(x0.size()) != p.n() || static_cast<index_t>(z0.size()) != p.m())
    fail(Errc::dimension_mismatch, "enumerate: start vector length");

  const std::vector<index_t> rows = nonzero_rows(p.a);
  const std::vector<index_t> cols = nonzero_cols(p.a);
  check_budget(rows.size(), cols.size(), k_max);

  const Vec v = p.svd.right_vector(ell);
  const double xstar_coeff = dot(p.x_star, v);  // <x - x_star, v> = <x, v> - this

  Vec row_sq(static_cast<std::size_t>(p.m())), col_sq(static_cast<std::size_t>(p.n()));
  double frob_sq = 0.0;
  for (index_t i = 0; i < p.m(); ++i) {
    row_sq[static_cast<std::size_t>(i)] = row_sq_norm(p.a, i);
    frob_sq += row_sq[static_cast<std::size_t>(i)];
  }
  for (index_t j = 0; j < p.n(); ++j) col_sq[static_cast<std::size_t>(j)] = col_sq_norm(p.a, j);

  Vec out(static_cast<std::size_t>(k_max) + 1, 0.0);

  // depth-first walk over all (j, i) selections, weighted by path probability
  struct Walker {
    const Problem& p;
    const std::vector<index_t>& rows;
    const std::vector<index_t>& cols;
    const Vec& row_sq;
    const Vec& col_sq;
    const Vec& v;
    double xstar_coeff;
    double frob_sq;
    int k_max;
    Vec& out;

    void walk(const Vec& x, const Vec& z, int depth, double prob) {
      out[static_cast<std::size_t>(depth)] += prob * (dot(x, v) - xstar_coeff);
      if (depth == k_max) return;
      for (index_t j : cols) {
        const double pj = col_sq[static_cast<std::size_t>(j)] / frob_sq;
        Vec z_next = z;
        double d = 0.0;
        for (index_t i = 0; i < p.m(); ++i) d += p.a(i, j) * z[static_cast<std::size_t>(i)];
        const double cz = d / col_sq[static_cast<std::size_t>(j)];
        for (index_t i = 0; i < p.m(); ++i) z_next[static_cast<std::size_t>(i)] -= cz * p.a(i, j);

        for (index_t i : rows) {
          const double pi = row_sq[static_cast<std::size_t>(i)] / frob_sq;
          Vec x_next = x;
          const double* row = p.a.row_ptr(i);
          double r = 0.0;
          for (index_t jj = 0; jj < p.n(); ++jj) r += row[jj] * x[static_cast<std::size_t>(jj)];
          r -= p.b[static_cast<std::size_t>(i)] - z_next[static_cast<std::size_t>(i)];
          const double cx = r / row_sq[static_cast<std::size_t>(i)];
          for (index_t jj = 0; jj < p.n(); ++jj) x_next[static_cast<std::size_t>(jj)] -= cx * row[jj];

          walk(x_next, z_next, depth + 1, prob * pj * pi);
        }
      }
    }
  };

  Walker w{p, rows, cols, row_sq, col_sq, v, xstar_coeff, frob_sq, k_max, out};
  w.walk(x0, z0, 0, 1.0);
  return out;
}

Vec enumerate_z_expectation(const Problem& p, const Vec& z0, int k_max, index_t ell) {
  if (ell < 1 || ell > p.svd.rank) fail(Errc::invalid_argument, "enumerate: ell out of range");
  if (static_cast<index_t>(z0.size()) != p.m())
    fail(Errc::dimension_mismatch, "enumerate: start vector length");

  const std::vector<index_t> cols = nonzero_cols(p.a);
  check_budget(1, cols.size(), k_max);

  // target: <z - (b - A x_star), A v_ell>
  const Vec av = matvec(p.a, p.svd.right_vector(ell));
  Vec resid = sub(p.b, matvec(p.a, p.x_star));  // b - A x_star
  const double resid_coeff = dot(resid, av);

  Vec col_sq(static_cast<std::size_t>(p.n()));
  double frob_sq = 0.0;
  for (index_t j = 0; j < p.n(); ++j) {
    col_sq[static_cast<std::size_t>(j)] = col_sq_norm(p.a, j);
    frob_sq += col_sq[static_cast<std::size_t>(j)];
  }

  Vec out(static_cast<std::size_t>(k_max) + 1, 0.0);

  struct Walker {
    const Problem& p;
    const std::vector<index_t>& cols;
    const Vec& col_sq;
    const Vec& av;
    double resid_coeff;
    double frob_sq;
    int k_max;
    Vec& out;

    void walk(const Vec& z, int depth, double prob) {
      out[static_cast<std::size_t>(depth)] += prob * (dot(z, av) - resid_coeff);
      if (depth == k_max) return;
      for (index_t j : cols) {
        const double pj = col_sq[static_cast<std::size_t>(j)] / frob_sq;
        Vec z_next = z;
        double d = 0.0;
        for (index_t i = 0; i < p.m(); ++i) d += p.a(i, j) * z[static_cast<std::size_t>(i)];
        const double cz = d / col_sq[static_cast<std::size_t>(j)];
        for (index_t i = 0; i < p.m(); ++i) z_next[static_cast<std::size_t>(i)] -= cz * p.a(i, j);
        walk(z_next, depth + 1, prob * pj);
      }
    }
  };

  Walker w{p, cols, col_sq, av, resid_coeff, frob_sq, k_max, out};
  w.walk(z0, 0, 1.0);
  return out;
}

McResult run_monte_carlo(const Problem& p, const std::vector<index_t>& ells,
                         const std::vector<std::uint64_t>& k_grid, std::uint64_t trials,
                         std::uint64_t seed, const McOptions& opts) {
  if (trials < 100) fail(Errc::invalid_argument, "run_monte_carlo: needs at least 100 trials");
  if (ells.empty() || k_grid.empty()) fail(Errc::invalid_argument, "run_monte_carlo: empty grid");
  for (index_t ell : ells)
    if (ell < 1 || ell > p.svd.rank) fail(Errc::invalid_argument, "run_monte_carlo: ell out of range");
  if (opts.track_z && opts.method != Method::rek)
    fail(Errc::invalid_argument, "run_monte_carlo: z tracking needs the extended method");

  std::vector<std::uint64_t> grid = k_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::uint64_t K = grid.back();

  // map k -> grid slot
  std::vector<std::int64_t> slot_of_k(static_cast<std::size_t>(K) + 1, -1);
  for (std::size_t s = 0; s < grid.size(); ++s) slot_of_k[grid[s]] = static_cast<std::int64_t>(s);

  const Vec x0 = opts.x0 ? *opts.x0 : Vec(static_cast<std::size_t>(p.n()), 0.0);
  const Vec z0 = opts.z0 ? *opts.z0 : p.b;

  const std::size_t ne = ells.size();
  const std::size_t nk = grid.size();

  std::vector<Vec> v_ell;
  std::vector<Vec> av_ell;  // A v_ell, for the z-chain coefficients
  v_ell.reserve(ne);
  for (index_t ell : ells) {
    v_ell.push_back(p.svd.right_vector(ell));
    if (opts.track_z) av_ell.push_back(matvec(p.a, v_ell.back()));
  }
  const Vec resid = sub(p.b, matvec(p.a, p.x_star));  // b - A x_star
  std::vector<double> xstar_coeff(ne), resid_coeff(ne, 0.0);
  for (std::size_t e = 0; e < ne; ++e) {
    xstar_coeff[e] = dot(p.x_star, v_ell[e]);
    if (opts.track_z) resid_coeff[e] = dot(resid, av_ell[e]);
  }

  // one slot per (trial, quantity, grid point): aggregation order then never
  // depends on the thread schedule
  Vec x_slots(trials * ne * nk, 0.0);
  Vec err2_slots(trials * nk, 0.0);
  Vec z_slots(opts.track_z ? trials * ne * nk : 0, 0.0);

  SolveConfig cfg;
  cfg.max_iters = K;
  cfg.record_every = 1;

  auto run_trial = [&](std::uint64_t t) {
    RngStream rng = derive_stream(seed, t);
    Observer obs = [&](std::uint64_t k, const Vec& x, const Vec& z) {
      if (k > K || slot_of_k[k] < 0) return;
      const std::size_t s = static_cast<std::size_t>(slot_of_k[k]);
      double err2 = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - p.x_star[j];
        err2 += d * d;
      }
      err2_slots[t * nk + s] = err2;
      for (std::size_t e = 0; e < ne; ++e) {
        x_slots[(t * ne + e) * nk + s] = dot(x, v_ell[e]) - xstar_coeff[e];
        if (opts.track_z) z_slots[(t * ne + e) * nk + s] = dot(z, av_ell[e]) - resid_coeff[e];
      }
    };
    if (opts.method == Method::rek) {
      rek_solve_from(p, x0, z0, cfg, rng, obs);
    } else {
      rk_solve_from(p, x0, cfg, rng, obs);
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  unsigned want = opts.threads > 0 ? static_cast<unsigned>(opts.threads) : (hw ? hw : 1);
  want = std::min<unsigned>(want, 64);
  if (want <= 1 || trials < 256) {
    for (std::uint64_t t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (trials + want - 1) / want;
    for (unsigned w = 0; w < want; ++w) {
      const std::uint64_t lo = w * chunk;
      const std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, trials);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        for (std::uint64_t t = lo; t < hi; ++t) run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  auto summarize = [&](const Vec& slots, std::size_t e, bool is_err2) {
    Vec mean(nk, 0.0), se(nk, 0.0);
    for (std::size_t s = 0; s < nk; ++s) {
      double acc = 0.0;
      for (std::uint64_t t = 0; t < trials; ++t)
        acc += is_err2 ? slots[t * nk + s] : slots[(t * ne + e) * nk + s];
      const double mu = acc / static_cast<double>(trials);
      double var = 0.0;
      for (std::uint64_t t = 0; t < trials; ++t) {
        const double d = (is_err2 ? slots[t * nk + s] : slots[(t * ne + e) * nk + s]) - mu;
        var += d * d;
      }
      var /= static_cast<double>(trials - 1);
      mean[s] = mu;
      se[s] = std::sqrt(var / static_cast<double>(trials));
    }
    return std::pair<Vec, Vec>(std::move(mean), std::move(se));
  };

  // matched theory: the z start used for prediction of the plain method is
  // the instance's own null-space component, whose A^T image vanishes
  const Vec& z0_theory = (opts.method == Method::rek) ? z0 : p.z;

  McResult res;
  res.trials = trials;
  for (std::size_t e = 0; e < ne; ++e) {
    auto [mean, se] = summarize(x_slots, e, false);
    McSummary s;
    s.ell = ells[e];
    s.k_grid = grid;
    s.mean = std::move(mean);
    s.stderr_ = std::move(se);
    s.trials = trials;
    const TheoryCurve curve = x_coeff_curve(p.svd, p, x0, z0_theory, ells[e], K);
    s.theory.resize(nk);
    for (std::size_t i = 0; i < nk; ++i) s.theory[i] = curve.values[grid[i]];
    res.x_coeff.push_back(std::move(s));
  }
  if (opts.track_z) {
    for (std::size_t e = 0; e < ne; ++e) {
      auto [mean, se] = summarize(z_slots, e, false);
      McSummary s;
      s.ell = ells[e];
      s.k_grid = grid;
      s.mean = std::move(mean);
      s.stderr_ = std::move(se);
      s.trials = trials;
      const TheoryCurve curve = z_coeff_curve(p.svd, p, z0, ells[e], K);
      s.theory.resize(nk);
      for (std::size_t i = 0; i < nk; ++i) s.theory[i] = curve.values[grid[i]];
      res.z_coeff.push_back(std::move(s));
    }
  }
  {
    auto [mean, se] = summarize(err2_slots, 0, true);
    res.err2.k_grid = grid;
    res.err2.mean = std::move(mean);
    res.err2.stderr_ = std::move(se);
    const TheoryCurve curve = error_bound_curve(p.svd, p, x0, z0_theory, K);
    res.err2.bound.resize(nk);
    for (std::size_t i = 0; i < nk; ++i) res.err2.bound[i] = curve.values[grid[i]];
  }
  return res;
}

}  // namespace klab
