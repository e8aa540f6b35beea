// klab -- command-line front end for the kaczlab shared library.
//
// Subcommands: gen, solve, verify, reproduce. Every command writes its
// outputs plus a plain-text manifest that reproduces the run bit-for-bit
// when replayed with the same seed. Exit codes: 0 success / all checks
// pass, 1 verification failure, 2 usage error, 3 I/O error.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kaczlab/kaczlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string& message) { throw CliError{code, message}; }

[[noreturn]] void die_status(klab_status st, const std::string& context) {
  const std::string msg = context + ": " + klab_last_error();
  if (st == KLAB_ERR_IO) die(kExitIo, msg);
  die(kExitUsage, msg);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> parse_spectrum(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      die(kExitUsage, "bad spectrum entry '" + tok + "'");
    }
  }
  return out;
}

std::vector<uint64_t> parse_u64_list(const std::string& s, const char* what) {
  std::vector<uint64_t> out;
  for (const auto& tok : split(s, ',')) {
    try {
      out.push_back(std::stoull(tok));
    } catch (const std::exception&) {
      die(kExitUsage, std::string("bad ") + what + " entry '" + tok + "'");
    }
  }
  return out;
}

// ell list; "r" resolves to the rank, "all" (where allowed) to 1..rank
std::vector<int64_t> parse_ells(const std::string& s, int64_t rank, bool allow_all) {
  std::vector<int64_t> out;
  for (const auto& tok : split(s, ',')) {
    if (tok == "r") {
      out.push_back(rank);
    } else if (allow_all && tok == "all") {
      for (int64_t ell = 1; ell <= rank; ++ell) out.push_back(ell);
    } else {
      try {
        out.push_back(std::stoll(tok));
      } catch (const std::exception&) {
        die(kExitUsage, "bad ell entry '" + tok + "'");
      }
    }
  }
  return out;
}

int env_threads() {
  const char* v = std::getenv("KLAB_THREADS");
  if (!v || !*v) return 0;  // auto
  return std::atoi(v);
}

struct ProblemHandle {
  klab_problem* p = nullptr;
  ~ProblemHandle() { klab_problem_free(p); }
};

struct TrajectoryHandle {
  klab_trajectory* t = nullptr;
  ~TrajectoryHandle() { klab_trajectory_free(t); }
};

struct McHandle {
  klab_mc* mc = nullptr;
  ~McHandle() { klab_mc_free(mc); }
};

void load_problem_or_die(const std::string& dir, ProblemHandle& h) {
  const klab_status st = klab_problem_load(dir.c_str(), &h.p);
  if (st == KLAB_OK) return;
  if (st == KLAB_ERR_IO) die(kExitIo, "cannot load problem from " + dir + ": " + klab_last_error());
  // an unreadable instance is a failed verification of its invariants
  die(kExitVerifyFail, "problem in " + dir + " failed validation: " + klab_last_error());
}

struct Csv {
  std::ofstream out;
  std::string path;
  explicit Csv(const std::string& p) : out(p), path(p) {
    if (!out) die(kExitIo, "cannot write " + p);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ",";
      out << cells[i];
    }
    out << "\n";
  }
  void close() {
    out.flush();
    if (!out) die(kExitIo, "write failed for " + path);
  }
};

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream mf(path, std::ios::app);
  if (!mf) die(kExitIo, "cannot write manifest " + path);
  for (const auto& [k, v] : kv) mf << k << "=" << v << "\n";
  if (!mf) die(kExitIo, "manifest write failed " + path);
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += " ";
    s += argv[i];
  }
  return s;
}

void print_spectrum_summary(const klab_problem* p) {
  int64_t m = 0, n = 0, rank = 0;
  double s1 = 0.0, sr = 0.0;
  klab_problem_dims(p, &m, &n);
  klab_problem_rank(p, &rank);
  if (rank > 0) {
    klab_problem_sigma(p, 1, &s1);
    klab_problem_sigma(p, rank, &sr);
  }
  std::printf("m=%" PRId64 " n=%" PRId64 " rank=%" PRId64 " sigma_1=%s sigma_r=%s\n", m, n, rank,
              fmt(s1).c_str(), fmt(sr).c_str());
}

// ---- gen --------------------------------------------------------------

struct GenArgs {
  bool paper = false;
  bool synthetic = false;
  int64_t m = 0;
  int64_t n = 1000;
  double shift = 100.0;
  double perturb = 0.01;
  int64_t zero_rows = 100;
  std::string spectrum;
  bool inconsistent = false;
  uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenArgs& a, const std::string& cmdline) {
  if (a.paper == a.synthetic) die(kExitUsage, "choose exactly one of --paper / --synthetic");

  ProblemHandle h;
  if (a.paper) {
    const klab_status st =
        klab_problem_gen_paper(a.n, a.shift, a.perturb, a.zero_rows, a.seed, &h.p);
    if (st != KLAB_OK) die_status(st, "gen --paper");
  } else {
    const std::vector<double> spec = parse_spectrum(a.spectrum);
    if (spec.empty()) die(kExitUsage, "--synthetic needs --spectrum");
    const klab_status st =
        klab_problem_gen_synthetic(a.m, a.n, spec.data(), static_cast<int64_t>(spec.size()),
                                   a.inconsistent ? 1 : 0, a.seed, &h.p);
    if (st != KLAB_OK) die_status(st, "gen --synthetic");
  }

  const klab_status st = klab_problem_save(h.p, a.out.c_str());
  if (st != KLAB_OK) die_status(st, "saving problem");
  write_manifest((std::filesystem::path(a.out) / "manifest.txt").string(),
                 {{"command", cmdline}, {"tool_version", klab_version()}});
  print_spectrum_summary(h.p);
  return kExitOk;
}

// ---- solve ------------------------------------------------------------

struct SolveArgs {
  std::string dir;
  std::string method = "rek";
  uint64_t iters = 1000;
  uint64_t record_every = 1;
  double resid_tol = 0.0;
  uint64_t seed = 0;
  uint64_t stream = 0;
  std::string track_ell;
  std::string out = "trajectory.csv";
};

int cmd_solve(const SolveArgs& a, const std::string& cmdline) {
  if (a.method != "rek" && a.method != "rk") die(kExitUsage, "--method must be rek or rk");
  ProblemHandle h;
  load_problem_or_die(a.dir, h);

  int64_t rank = 0;
  klab_problem_rank(h.p, &rank);
  std::vector<int64_t> ells;
  if (!a.track_ell.empty()) ells = parse_ells(a.track_ell, rank, false);

  klab_solve_config cfg{a.iters, a.record_every, a.resid_tol};
  TrajectoryHandle traj;
  const klab_status st =
      klab_solve(h.p, a.method == "rk" ? KLAB_METHOD_RK : KLAB_METHOD_REK, &cfg, a.seed, a.stream,
                 ells.empty() ? nullptr : ells.data(), static_cast<int64_t>(ells.size()), &traj.t);
  if (st != KLAB_OK) die_status(st, "solve");

  Csv csv(a.out);
  std::vector<std::string> header{"k", "err_norm", "alignment", "rayleigh"};
  for (int64_t ell : ells) header.push_back("coeff_ell_" + std::to_string(ell));
  csv.row(header);

  int64_t len = 0;
  klab_trajectory_len(traj.t, &len);
  for (int64_t i = 0; i < len; ++i) {
    uint64_t k = 0;
    double err = 0.0, align = 0.0, ray = 0.0;
    klab_trajectory_row(traj.t, i, &k, &err, &align, &ray);
    std::vector<std::string> cells{std::to_string(k), fmt(err), fmt(align), fmt(ray)};
    for (std::size_t e = 0; e < ells.size(); ++e) {
      double c = 0.0;
      klab_trajectory_coeff(traj.t, static_cast<int64_t>(e), i, &c);
      cells.push_back(fmt(c));
    }
    csv.row(cells);
  }
  csv.close();

  write_manifest(a.out + ".manifest", {{"command", cmdline},
                                       {"tool_version", klab_version()},
                                       {"problem", a.dir},
                                       {"rows", std::to_string(len)},
                                       {"output", a.out}});
  return kExitOk;
}

// ---- verify -----------------------------------------------------------

struct VerifyArgs {
  std::string dir;
  bool auto_instance = false;
  std::string mode;
  int64_t kmax = 3;
  std::string ell = "all";
  uint64_t trials = 20000;
  std::string kgrid = "1,2,5,10,20,50";
  uint64_t seed = 0;
  bool track_z = false;
  std::string out = "verify_out";
};

int verify_enumerate(const VerifyArgs& a, klab_problem* p, const std::string& cmdline) {
  int64_t rank = 0;
  klab_problem_rank(p, &rank);
  const std::vector<int64_t> ells = parse_ells(a.ell, rank, true);
  const double tol = 1e-12;

  std::filesystem::create_directories(a.out);
  Csv xcsv((std::filesystem::path(a.out) / "x_coeff.csv").string());
  Csv zcsv((std::filesystem::path(a.out) / "z_coeff.csv").string());
  const std::vector<std::string> header{"ell", "k", "theory", "estimate", "stderr", "pass"};
  xcsv.row(header);
  zcsv.row(header);

  bool all_pass = true;
  std::vector<double> exact(static_cast<std::size_t>(a.kmax) + 1);
  std::vector<double> curve(static_cast<std::size_t>(a.kmax) + 1);
  for (int64_t ell : ells) {
    klab_status st = klab_enumerate_x(p, nullptr, nullptr, a.kmax, ell, exact.data());
    if (st != KLAB_OK) die_status(st, "enumerate");
    st = klab_x_coeff_curve(p, nullptr, nullptr, ell, static_cast<uint64_t>(a.kmax), curve.data());
    if (st != KLAB_OK) die_status(st, "curve");
    for (int64_t k = 0; k <= a.kmax; ++k) {
      const bool pass = std::abs(exact[k] - curve[k]) <= tol;
      all_pass = all_pass && pass;
      xcsv.row({std::to_string(ell), std::to_string(k), fmt(curve[k]), fmt(exact[k]), fmt(0.0),
                pass ? "1" : "0"});
    }

    st = klab_enumerate_z(p, nullptr, a.kmax, ell, exact.data());
    if (st != KLAB_OK) die_status(st, "enumerate z");
    st = klab_z_coeff_curve(p, nullptr, ell, static_cast<uint64_t>(a.kmax), curve.data());
    if (st != KLAB_OK) die_status(st, "z curve");
    for (int64_t k = 0; k <= a.kmax; ++k) {
      const bool pass = std::abs(exact[k] - curve[k]) <= tol;
      all_pass = all_pass && pass;
      zcsv.row({std::to_string(ell), std::to_string(k), fmt(curve[k]), fmt(exact[k]), fmt(0.0),
                pass ? "1" : "0"});
    }
  }
  xcsv.close();
  zcsv.close();

  write_manifest((std::filesystem::path(a.out) / "manifest.txt").string(),
                 {{"command", cmdline},
                  {"tool_version", klab_version()},
                  {"mode", "enumerate"},
                  {"kmax", std::to_string(a.kmax)},
                  {"tolerance", fmt(tol)},
                  {"result", all_pass ? "pass" : "fail"}});
  std::printf("enumerate verification: %s\n", all_pass ? "pass" : "FAIL");
  return all_pass ? kExitOk : kExitVerifyFail;
}

int verify_montecarlo(const VerifyArgs& a, klab_problem* p, const std::string& cmdline) {
  int64_t rank = 0;
  klab_problem_rank(p, &rank);
  const std::vector<int64_t> ells = parse_ells(a.ell, rank, true);
  const std::vector<uint64_t> grid = parse_u64_list(a.kgrid, "kgrid");
  if (grid.empty()) die(kExitUsage, "empty --kgrid");

  McHandle mc;
  const klab_status st = klab_monte_carlo(
      p, KLAB_METHOD_REK, ells.data(), static_cast<int64_t>(ells.size()), grid.data(),
      static_cast<int64_t>(grid.size()), a.trials, a.seed, a.track_z ? 1 : 0, env_threads(),
      &mc.mc);
  if (st != KLAB_OK) die_status(st, "monte carlo");

  int64_t n_ells = 0, n_k = 0;
  klab_mc_grid(mc.mc, &n_ells, &n_k);

  std::filesystem::create_directories(a.out);
  const std::vector<std::string> header{"ell", "k", "theory", "estimate", "stderr", "pass"};
  bool all_pass = true;

  {
    Csv csv((std::filesystem::path(a.out) / "x_coeff.csv").string());
    csv.row(header);
    for (int64_t e = 0; e < n_ells; ++e) {
      int64_t ell = 0;
      klab_mc_ell(mc.mc, e, &ell);
      for (int64_t i = 0; i < n_k; ++i) {
        uint64_t k = 0;
        double mean = 0.0, se = 0.0, theory = 0.0;
        klab_mc_grid_k(mc.mc, i, &k);
        klab_mc_x_stats(mc.mc, e, i, &mean, &se, &theory);
        const bool pass = std::abs(mean - theory) <= 4.0 * se;
        all_pass = all_pass && pass;
        csv.row({std::to_string(ell), std::to_string(k), fmt(theory), fmt(mean), fmt(se),
                 pass ? "1" : "0"});
      }
    }
    csv.close();
  }

  if (a.track_z) {
    Csv csv((std::filesystem::path(a.out) / "z_coeff.csv").string());
    csv.row(header);
    for (int64_t e = 0; e < n_ells; ++e) {
      int64_t ell = 0;
      klab_mc_ell(mc.mc, e, &ell);
      for (int64_t i = 0; i < n_k; ++i) {
        uint64_t k = 0;
        double mean = 0.0, se = 0.0, theory = 0.0;
        klab_mc_grid_k(mc.mc, i, &k);
        klab_mc_z_stats(mc.mc, e, i, &mean, &se, &theory);
        const bool pass = std::abs(mean - theory) <= 4.0 * se;
        all_pass = all_pass && pass;
        csv.row({std::to_string(ell), std::to_string(k), fmt(theory), fmt(mean), fmt(se),
                 pass ? "1" : "0"});
      }
    }
    csv.close();
  }

  {
    Csv csv((std::filesystem::path(a.out) / "err_bound.csv").string());
    csv.row(header);
    for (int64_t i = 0; i < n_k; ++i) {
      uint64_t k = 0;
      double mean = 0.0, se = 0.0, bound = 0.0;
      klab_mc_grid_k(mc.mc, i, &k);
      klab_mc_err2_stats(mc.mc, i, &mean, &se, &bound);
      const bool pass = mean <= bound + 4.0 * se;
      all_pass = all_pass && pass;
      csv.row({"0", std::to_string(k), fmt(bound), fmt(mean), fmt(se), pass ? "1" : "0"});
    }
    csv.close();
  }

  write_manifest((std::filesystem::path(a.out) / "manifest.txt").string(),
                 {{"command", cmdline},
                  {"tool_version", klab_version()},
                  {"mode", "montecarlo"},
                  {"trials", std::to_string(a.trials)},
                  {"seed", std::to_string(a.seed)},
                  {"result", all_pass ? "pass" : "fail"}});
  std::printf("monte carlo verification: %s\n", all_pass ? "pass" : "FAIL");
  return all_pass ? kExitOk : kExitVerifyFail;
}

int cmd_verify(const VerifyArgs& a, const std::string& cmdline) {
  if (a.mode != "enumerate" && a.mode != "montecarlo")
    die(kExitUsage, "--mode must be enumerate or montecarlo");
  if (a.dir.empty() && !a.auto_instance) die(kExitUsage, "give a problem directory or --auto");

  ProblemHandle h;
  if (a.auto_instance) {
    // built-in tiny inconsistent instance, cheap to enumerate
    const double spectrum[2] = {1.5, 0.75};
    const klab_status st = klab_problem_gen_synthetic(3, 2, spectrum, 2, 1, a.seed, &h.p);
    if (st != KLAB_OK) die_status(st, "building the --auto instance");
  } else {
    load_problem_or_die(a.dir, h);
  }

  if (a.mode == "enumerate") return verify_enumerate(a, h.p, cmdline);
  return verify_montecarlo(a, h.p, cmdline);
}

// ---- reproduce ----------------------------------------------------------

struct ReproduceArgs {
  std::string scale = "desk";
  uint64_t seed = 6;  // default instance shows a clean spectral gap at desk scale
  uint64_t iters = 0;         // 0 = scale default
  uint64_t record_every = 0;  // 0 = scale default
  std::string out = "reproduce_out";
};

double window_median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_reproduce(const ReproduceArgs& a, const std::string& cmdline) {
  int64_t n = 0, zero_rows = 0;
  double shift = 0.0;
  uint64_t iters = 0, record_every = 1;
  if (a.scale == "desk") {
    n = 100;
    shift = 10.0;
    zero_rows = 10;
    iters = 200000;
    record_every = 1;
  } else if (a.scale == "paper") {
    n = 1000;
    shift = 100.0;
    zero_rows = 100;
    iters = 500000;
    record_every = 100;
  } else {
    die(kExitUsage, "--scale must be desk or paper");
  }
  const double perturb = 0.01;
  if (a.iters > 0) iters = a.iters;
  if (a.record_every > 0) record_every = a.record_every;

  ProblemHandle h;
  klab_status st = klab_problem_gen_paper(n, shift, perturb, zero_rows, a.seed, &h.p);
  if (st != KLAB_OK) die_status(st, "building the demo instance");

  int64_t rank = 0;
  double sigma_r = 0.0;
  klab_problem_rank(h.p, &rank);
  klab_problem_sigma(h.p, rank, &sigma_r);

  klab_solve_config cfg{iters, record_every, 0.0};
  TrajectoryHandle traj;
  st = klab_solve(h.p, KLAB_METHOD_REK, &cfg, a.seed, 0, nullptr, 0, &traj.t);
  if (st != KLAB_OK) die_status(st, "solve");

  std::filesystem::create_directories(a.out);
  Csv fig1((std::filesystem::path(a.out) / "fig1.csv").string());
  Csv fig2((std::filesystem::path(a.out) / "fig2.csv").string());
  fig1.row({"k", "alignment"});
  fig2.row({"k", "rayleigh", "sigma_r"});

  int64_t len = 0;
  klab_trajectory_len(traj.t, &len);
  std::vector<double> head_align, tail_align, head_ray, tail_ray;
  for (int64_t i = 0; i < len; ++i) {
    uint64_t k = 0;
    double err = 0.0, align = 0.0, ray = 0.0;
    klab_trajectory_row(traj.t, i, &k, &err, &align, &ray);
    fig1.row({std::to_string(k), fmt(align)});
    fig2.row({std::to_string(k), fmt(ray), fmt(sigma_r)});
    if (k >= 1 && k <= iters / 100) {
      head_align.push_back(align);
      head_ray.push_back(ray);
    }
    if (k >= iters - iters / 10) {
      tail_align.push_back(align);
      tail_ray.push_back(ray);
    }
  }
  fig1.close();
  fig2.close();

  const double head_a = window_median(std::move(head_align));
  const double tail_a = window_median(std::move(tail_align));
  const double head_r = window_median(std::move(head_ray));
  const double tail_r = window_median(std::move(tail_ray));

  write_manifest((std::filesystem::path(a.out) / "manifest.txt").string(),
                 {{"command", cmdline},
                  {"tool_version", klab_version()},
                  {"scale", a.scale},
                  {"seed", std::to_string(a.seed)},
                  {"iters", std::to_string(iters)},
                  {"record_every", std::to_string(record_every)},
                  {"sigma_r", fmt(sigma_r)},
                  {"alignment_median_first_1pct", fmt(head_a)},
                  {"alignment_median_last_10pct", fmt(tail_a)},
                  {"rayleigh_median_first_1pct", fmt(head_r)},
                  {"rayleigh_median_last_10pct", fmt(tail_r)}});

  std::printf("sigma_r=%s\n", fmt(sigma_r).c_str());
  std::printf("alignment medians: first 1%% = %s, last 10%% = %s\n", fmt(head_a).c_str(),
              fmt(tail_a).c_str());
  std::printf("rayleigh medians:  first 1%% = %s, last 10%% = %s\n", fmt(head_r).c_str(),
              fmt(tail_r).c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized extended Kaczmarz laboratory"};
  app.require_subcommand(1);
  const std::string cmdline = join_args(argc, argv);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a problem directory");
  gen_cmd->add_flag("--paper", gen.paper, "ill-conditioned demo construction");
  gen_cmd->add_flag("--synthetic", gen.synthetic, "prescribed-spectrum instance");
  gen_cmd->add_option("--m", gen.m, "rows (synthetic)");
  gen_cmd->add_option("--n", gen.n, "columns");
  gen_cmd->add_option("--shift", gen.shift, "diagonal shift (paper)");
  gen_cmd->add_option("--perturb", gen.perturb, "duplicate-row perturbation (paper)");
  gen_cmd->add_option("--zero-rows", gen.zero_rows, "appended zero rows (paper)");
  gen_cmd->add_option("--spectrum", gen.spectrum, "comma list, nonincreasing (synthetic)");
  gen_cmd->add_flag("--inconsistent", gen.inconsistent, "add a null-space component to b");
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("--out", gen.out, "output directory")->required();

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run a solver and record a trajectory CSV");
  solve_cmd->add_option("dir", solve.dir, "problem directory")->required();
  solve_cmd->add_option("--method", solve.method, "rek | rk");
  solve_cmd->add_option("--iters", solve.iters, "iteration count");
  solve_cmd->add_option("--record-every", solve.record_every, "recording cadence");
  solve_cmd->add_option("--resid-tol", solve.resid_tol, "residual stopping tolerance");
  solve_cmd->add_option("--seed", solve.seed, "solver seed");
  solve_cmd->add_option("--stream", solve.stream, "stream id");
  solve_cmd->add_option("--track-ell", solve.track_ell, "comma list of ell indices; r = rank");
  solve_cmd->add_option("--out", solve.out, "output CSV path");

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "check the expectation formulas");
  verify_cmd->add_option("dir", verify.dir, "problem directory");
  verify_cmd->add_flag("--auto", verify.auto_instance, "use a built-in tiny instance");
  verify_cmd->add_option("--mode", verify.mode, "enumerate | montecarlo")->required();
  verify_cmd->add_option("--kmax", verify.kmax, "enumeration depth");
  verify_cmd->add_option("--ell", verify.ell, "comma list of ell indices; all | r");
  verify_cmd->add_option("--trials", verify.trials, "Monte Carlo trials");
  verify_cmd->add_option("--kgrid", verify.kgrid, "comma list of checkpoints");
  verify_cmd->add_option("--seed", verify.seed, "Monte Carlo seed");
  verify_cmd->add_flag("--track-z", verify.track_z, "also verify the column-chain coefficients");
  verify_cmd->add_option("--out", verify.out, "output directory");

  ReproduceArgs rep;
  CLI::App* rep_cmd = app.add_subcommand("reproduce", "regenerate the preconvergence figure data");
  rep_cmd->add_option("--scale", rep.scale, "desk | paper");
  rep_cmd->add_option("--seed", rep.seed, "seed");
  rep_cmd->add_option("--iters", rep.iters, "override the iteration count");
  rep_cmd->add_option("--record-every", rep.record_every, "override the recording cadence");
  rep_cmd->add_option("--out", rep.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, cmdline);
    if (solve_cmd->parsed()) return cmd_solve(solve, cmdline);
    if (verify_cmd->parsed()) return cmd_verify(verify, cmdline);
    if (rep_cmd->parsed()) return cmd_reproduce(rep, cmdline);
  } catch (const CliError& e) {
    std::fprintf(stderr, "klab: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "klab: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
