#include "kaczlab/kaczlab.h"

#include <cstring>
#include <string>

#include "error.hpp"
#include "experiments.hpp"
#include "matrix.hpp"
#include "problem.hpp"
#include "rng.hpp"
#include "solvers.hpp"
#include "theory.hpp"

#ifndef KLAB_BUILD_VERSION
#define KLAB_BUILD_VERSION "0.0.0"
#endif

namespace {

thread_local std::string g_last_error;

klab_status to_status(klab::Errc code) {
  switch (code) {
    case klab::Errc::invalid_argument: return KLAB_ERR_INVALID;
    case klab::Errc::dimension_mismatch: return KLAB_ERR_DIMENSION;
    case klab::Errc::degenerate: return KLAB_ERR_DEGENERATE;
    case klab::Errc::budget_exceeded: return KLAB_ERR_BUDGET;
    case klab::Errc::io: return KLAB_ERR_IO;
    case klab::Errc::numeric: return KLAB_ERR_NUMERIC;
  }
  return KLAB_ERR_INTERNAL;
}

template <typename Fn>
klab_status guarded(Fn&& fn) {
  try {
    fn();
    return KLAB_OK;
  } catch (const klab::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KLAB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KLAB_ERR_INTERNAL;
  }
}

klab_status invalid(const char* msg) {
  g_last_error = msg;
  return KLAB_ERR_INVALID;
}

klab::Vec copy_vec(const double* data, klab::index_t len) {
  return klab::Vec(data, data + len);
}

klab::Vec default_x0(const klab::Problem& p, const double* x0) {
  return x0 ? copy_vec(x0, p.n()) : klab::Vec(static_cast<std::size_t>(p.n()), 0.0);
}

klab::Vec default_z0(const klab::Problem& p, const double* z0) {
  return z0 ? copy_vec(z0, p.m()) : p.b;
}

klab_status mc_stats(const std::vector<klab::McSummary>& list, int64_t ell_idx, int64_t k_idx,
                     double* mean, double* stderr_out, double* theory) {
  if (ell_idx < 0 || ell_idx >= static_cast<int64_t>(list.size()))
    return invalid("mc stats: ell index out of range");
  const auto& s = list[static_cast<std::size_t>(ell_idx)];
  if (k_idx < 0 || k_idx >= static_cast<int64_t>(s.k_grid.size()))
    return invalid("mc stats: k index out of range");
  const auto i = static_cast<std::size_t>(k_idx);
  if (mean) *mean = s.mean[i];
  if (stderr_out) *stderr_out = s.stderr_[i];
  if (theory) *theory = s.theory[i];
  return KLAB_OK;
}

}  // namespace

struct klab_problem {
  klab::Problem p;
};

struct klab_trajectory {
  klab::TrajectoryRecord traj;
};

struct klab_mc {
  klab::McResult res;
};

extern "C" {

const char* klab_version(void) { return KLAB_BUILD_VERSION; }

const char* klab_last_error(void) { return g_last_error.c_str(); }

klab_status klab_problem_gen_paper(int64_t n, double shift, double perturb, int64_t zero_rows,
                                   uint64_t seed, klab_problem** out) {
  if (!out) return invalid("gen_paper: out is NULL");
  *out = nullptr;
  return guarded([&] {
    klab::RngStream rng(seed, 0);
    auto* h = new klab_problem{klab::gen_paper_problem(n, shift, perturb, zero_rows, rng)};
    *out = h;
  });
}

klab_status klab_problem_gen_synthetic(int64_t m, int64_t n, const double* spectrum,
                                       int64_t spectrum_len, int inconsistent, uint64_t seed,
                                       klab_problem** out) {
  if (!out) return invalid("gen_synthetic: out is NULL");
  if (!spectrum || spectrum_len < 1) return invalid("gen_synthetic: empty spectrum");
  *out = nullptr;
  return guarded([&] {
    klab::RngStream rng(seed, 0);
    const klab::Vec spec = copy_vec(spectrum, spectrum_len);
    auto* h = new klab_problem{klab::gen_synthetic(m, n, spec, inconsistent != 0, rng)};
    *out = h;
  });
}

klab_status klab_problem_load(const char* dir, klab_problem** out) {
  if (!out || !dir) return invalid("load: NULL argument");
  *out = nullptr;
  return guarded([&] { *out = new klab_problem{klab::load_problem(dir)}; });
}

klab_status klab_problem_save(const klab_problem* p, const char* dir) {
  if (!p || !dir) return invalid("save: NULL argument");
  return guarded([&] { klab::save_problem(p->p, dir); });
}

void klab_problem_free(klab_problem* p) { delete p; }

klab_status klab_problem_dims(const klab_problem* p, int64_t* m, int64_t* n) {
  if (!p || !m || !n) return invalid("dims: NULL argument");
  *m = p->p.m();
  *n = p->p.n();
  return KLAB_OK;
}

klab_status klab_problem_rank(const klab_problem* p, int64_t* rank) {
  if (!p || !rank) return invalid("rank: NULL argument");
  *rank = p->p.svd.rank;
  return KLAB_OK;
}

klab_status klab_problem_sigma(const klab_problem* p, int64_t ell, double* out) {
  if (!p || !out) return invalid("sigma: NULL argument");
  if (ell < 1 || ell > static_cast<int64_t>(p->p.svd.sigma.size()))
    return invalid("sigma: ell out of range");
  *out = p->p.svd.sigma[static_cast<std::size_t>(ell - 1)];
  return KLAB_OK;
}

klab_status klab_problem_frobenius(const klab_problem* p, double* out) {
  if (!p || !out) return invalid("frobenius: NULL argument");
  *out = klab::frobenius_norm(p->p.a);
  return KLAB_OK;
}

klab_status klab_problem_is_consistent(const klab_problem* p, int* out) {
  if (!p || !out) return invalid("is_consistent: NULL argument");
  *out = p->p.consistent() ? 1 : 0;
  return KLAB_OK;
}

klab_status klab_solve(const klab_problem* p, klab_method method, const klab_solve_config* cfg,
                       uint64_t seed, uint64_t stream, const int64_t* track_ells, int64_t n_track,
                       klab_trajectory** out) {
  if (!p || !cfg || !out) return invalid("solve: NULL argument");
  if (n_track > 0 && !track_ells) return invalid("solve: NULL track list");
  *out = nullptr;
  return guarded([&] {
    klab::SolveConfig sc;
    sc.max_iters = cfg->max_iters;
    sc.record_every = cfg->record_every == 0 ? 1 : cfg->record_every;
    sc.resid_tol = cfg->resid_tol;
    std::vector<klab::index_t> ells(track_ells, track_ells + (n_track > 0 ? n_track : 0));
    klab::RngStream rng = klab::derive_stream(seed, stream);
    klab::SolveRun run = klab::solve_recorded(
        p->p, method == KLAB_METHOD_RK ? klab::Method::rk : klab::Method::rek, sc, rng, ells);
    *out = new klab_trajectory{std::move(run.traj)};
  });
}

void klab_trajectory_free(klab_trajectory* t) { delete t; }

klab_status klab_trajectory_len(const klab_trajectory* t, int64_t* len) {
  if (!t || !len) return invalid("trajectory_len: NULL argument");
  *len = static_cast<int64_t>(t->traj.ks.size());
  return KLAB_OK;
}

klab_status klab_trajectory_row(const klab_trajectory* t, int64_t i, uint64_t* k, double* err_norm,
                                double* alignment, double* rayleigh) {
  if (!t) return invalid("trajectory_row: NULL handle");
  if (i < 0 || i >= static_cast<int64_t>(t->traj.ks.size()))
    return invalid("trajectory_row: index out of range");
  const auto ii = static_cast<std::size_t>(i);
  if (k) *k = t->traj.ks[ii];
  if (err_norm) *err_norm = t->traj.err_norm[ii];
  if (alignment) *alignment = t->traj.alignment[ii];
  if (rayleigh) *rayleigh = t->traj.rayleigh[ii];
  return KLAB_OK;
}

klab_status klab_trajectory_coeff(const klab_trajectory* t, int64_t track_idx, int64_t i,
                                  double* out) {
  if (!t || !out) return invalid("trajectory_coeff: NULL argument");
  if (track_idx < 0 || track_idx >= static_cast<int64_t>(t->traj.coeffs.size()))
    return invalid("trajectory_coeff: track index out of range");
  const auto& series = t->traj.coeffs[static_cast<std::size_t>(track_idx)];
  if (i < 0 || i >= static_cast<int64_t>(series.size()))
    return invalid("trajectory_coeff: row index out of range");
  *out = series[static_cast<std::size_t>(i)];
  return KLAB_OK;
}

klab_status klab_x_coeff_curve(const klab_problem* p, const double* x0, const double* z0,
                               int64_t ell, uint64_t kmax, double* values) {
  if (!p || !values) return invalid("x_coeff_curve: NULL argument");
  return guarded([&] {
    const klab::TheoryCurve c = klab::x_coeff_curve(p->p.svd, p->p, default_x0(p->p, x0),
                                                    default_z0(p->p, z0), ell, kmax);
    std::memcpy(values, c.values.data(), sizeof(double) * c.values.size());
  });
}

klab_status klab_z_coeff_curve(const klab_problem* p, const double* z0, int64_t ell, uint64_t kmax,
                               double* values) {
  if (!p || !values) return invalid("z_coeff_curve: NULL argument");
  return guarded([&] {
    const klab::TheoryCurve c =
        klab::z_coeff_curve(p->p.svd, p->p, default_z0(p->p, z0), ell, kmax);
    std::memcpy(values, c.values.data(), sizeof(double) * c.values.size());
  });
}

klab_status klab_error_bound_curve(const klab_problem* p, const double* x0, const double* z0,
                                   uint64_t kmax, double* values) {
  if (!p || !values) return invalid("error_bound_curve: NULL argument");
  return guarded([&] {
    const klab::TheoryCurve c = klab::error_bound_curve(p->p.svd, p->p, default_x0(p->p, x0),
                                                        default_z0(p->p, z0), kmax);
    std::memcpy(values, c.values.data(), sizeof(double) * c.values.size());
  });
}

klab_status klab_directional_contraction(const klab_problem* p, const double* e, double* out) {
  if (!p || !e || !out) return invalid("directional_contraction: NULL argument");
  return guarded([&] { *out = klab::directional_contraction(p->p.a, copy_vec(e, p->p.n())); });
}

klab_status klab_enumerate_x(const klab_problem* p, const double* x0, const double* z0,
                             int64_t kmax, int64_t ell, double* values) {
  if (!p || !values) return invalid("enumerate_x: NULL argument");
  if (kmax < 0) return invalid("enumerate_x: negative kmax");
  return guarded([&] {
    const klab::Vec out = klab::enumerate_x_expectation(p->p, default_x0(p->p, x0),
                                                        default_z0(p->p, z0),
                                                        static_cast<int>(kmax), ell);
    std::memcpy(values, out.data(), sizeof(double) * out.size());
  });
}

klab_status klab_enumerate_z(const klab_problem* p, const double* z0, int64_t kmax, int64_t ell,
                             double* values) {
  if (!p || !values) return invalid("enumerate_z: NULL argument");
  if (kmax < 0) return invalid("enumerate_z: negative kmax");
  return guarded([&] {
    const klab::Vec out = klab::enumerate_z_expectation(p->p, default_z0(p->p, z0),
                                                        static_cast<int>(kmax), ell);
    std::memcpy(values, out.data(), sizeof(double) * out.size());
  });
}

klab_status klab_monte_carlo(const klab_problem* p, klab_method method, const int64_t* ells,
                             int64_t n_ells, const uint64_t* k_grid, int64_t n_k, uint64_t trials,
                             uint64_t seed, int track_z, int threads, klab_mc** out) {
  if (!p || !out) return invalid("monte_carlo: NULL argument");
  if (!ells || n_ells < 1 || !k_grid || n_k < 1) return invalid("monte_carlo: empty grid");
  *out = nullptr;
  return guarded([&] {
    std::vector<klab::index_t> e(ells, ells + n_ells);
    std::vector<std::uint64_t> g(k_grid, k_grid + n_k);
    klab::McOptions opts;
    opts.method = method == KLAB_METHOD_RK ? klab::Method::rk : klab::Method::rek;
    opts.track_z = track_z != 0;
    opts.threads = threads;
    *out = new klab_mc{klab::run_monte_carlo(p->p, e, g, trials, seed, opts)};
  });
}

void klab_mc_free(klab_mc* mc) { delete mc; }

klab_status klab_mc_grid(const klab_mc* mc, int64_t* n_ells, int64_t* n_k) {
  if (!mc) return invalid("mc_grid: NULL handle");
  if (n_ells) *n_ells = static_cast<int64_t>(mc->res.x_coeff.size());
  if (n_k) *n_k = static_cast<int64_t>(mc->res.err2.k_grid.size());
  return KLAB_OK;
}

klab_status klab_mc_grid_k(const klab_mc* mc, int64_t k_idx, uint64_t* k) {
  if (!mc || !k) return invalid("mc_grid_k: NULL argument");
  if (k_idx < 0 || k_idx >= static_cast<int64_t>(mc->res.err2.k_grid.size()))
    return invalid("mc_grid_k: index out of range");
  *k = mc->res.err2.k_grid[static_cast<std::size_t>(k_idx)];
  return KLAB_OK;
}

klab_status klab_mc_ell(const klab_mc* mc, int64_t ell_idx, int64_t* ell) {
  if (!mc || !ell) return invalid("mc_ell: NULL argument");
  if (ell_idx < 0 || ell_idx >= static_cast<int64_t>(mc->res.x_coeff.size()))
    return invalid("mc_ell: index out of range");
  *ell = mc->res.x_coeff[static_cast<std::size_t>(ell_idx)].ell;
  return KLAB_OK;
}

klab_status klab_mc_x_stats(const klab_mc* mc, int64_t ell_idx, int64_t k_idx, double* mean,
                            double* stderr_out, double* theory) {
  if (!mc) return invalid("mc_x_stats: NULL handle");
  return mc_stats(mc->res.x_coeff, ell_idx, k_idx, mean, stderr_out, theory);
}

klab_status klab_mc_z_stats(const klab_mc* mc, int64_t ell_idx, int64_t k_idx, double* mean,
                            double* stderr_out, double* theory) {
  if (!mc) return invalid("mc_z_stats: NULL handle");
  if (mc->res.z_coeff.empty()) return invalid("mc_z_stats: z tracking was not requested");
  return mc_stats(mc->res.z_coeff, ell_idx, k_idx, mean, stderr_out, theory);
}

klab_status klab_mc_err2_stats(const klab_mc* mc, int64_t k_idx, double* mean, double* stderr_out,
                               double* bound) {
  if (!mc) return invalid("mc_err2_stats: NULL handle");
  const auto& s = mc->res.err2;
  if (k_idx < 0 || k_idx >= static_cast<int64_t>(s.k_grid.size()))
    return invalid("mc_err2_stats: k index out of range");
  const auto i = static_cast<std::size_t>(k_idx);
  if (mean) *mean = s.mean[i];
  if (stderr_out) *stderr_out = s.stderr_[i];
  if (bound) *bound = s.bound[i];
  return KLAB_OK;
}

klab_status klab_metric_alignment(const klab_problem* p, const double* x, int64_t ell,
                                  double* out) {
  if (!p || !x || !out) return invalid("metric_alignment: NULL argument");
  return guarded([&] {
    if (ell < 1 || ell > p->p.svd.rank)
      klab::fail(klab::Errc::invalid_argument, "metric_alignment: ell out of range");
    *out = klab::metric_alignment(copy_vec(x, p->p.n()), p->p.x_star, p->p.svd.right_vector(ell));
  });
}

klab_status klab_metric_rayleigh(const klab_problem* p, const double* x, double* out) {
  if (!p || !x || !out) return invalid("metric_rayleigh: NULL argument");
  return guarded([&] { *out = klab::metric_rayleigh(p->p.a, copy_vec(x, p->p.n()), p->p.x_star); });
}

}  // extern "C"
