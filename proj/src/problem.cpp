#include "problem.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "mmio.hpp"

namespace klab {

namespace {

Vec gaussian_vec(index_t len, RngStream& rng) {
  Vec v(static_cast<std::size_t>(len));
  for (auto& x : v) x = rng.next_gaussian();
  return v;
}

// z candidate: Gaussian vector projected onto null(A^T), unit-normalized.
// Returns the zero vector when the null space is (numerically) empty.
Vec make_null_t_vector(const Svd& f, RngStream& rng) {
  Vec y = gaussian_vec(f.m(), rng);
  Vec znull = project_null_t(f, y);
  const double zn = nrm2(znull);
  if (zn <= 1e-8 * nrm2(y)) return Vec(static_cast<std::size_t>(f.m()), 0.0);
  for (auto& x : znull) x /= zn;
  return znull;
}

}  // namespace

void validate_problem(const Problem& p) {
  const index_t m = p.m();
  const index_t n = p.n();
  if (static_cast<index_t>(p.b.size()) != m || static_cast<index_t>(p.z.size()) != m ||
      static_cast<index_t>(p.x_star.size()) != n)
    fail(Errc::dimension_mismatch, "problem: vector lengths do not match the matrix");
  if (!p.a.all_finite() || !all_finite(p.b) || !all_finite(p.x_star) || !all_finite(p.z))
    fail(Errc::numeric, "problem: non-finite entries");

  const double anorm = frobenius_norm(p.a);

  // b = A x_star + z
  Vec ax = matvec(p.a, p.x_star);
  double resid = 0.0;
  for (index_t i = 0; i < m; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    resid = std::max(resid, std::abs(p.b[ii] - ax[ii] - p.z[ii]));
  }
  const double scale = std::max(1.0, anorm * nrm2(p.x_star) + nrm2(p.z));
  if (resid > 1e-10 * scale) fail(Errc::invalid_argument, "problem: b != A x_star + z");

  // z in null(A^T)
  const double zn = nrm2(p.z);
  if (zn > 0.0) {
    const double atz = max_abs(matvec_t(p.a, p.z));
    if (atz > 1e-10 * anorm * zn) fail(Errc::invalid_argument, "problem: z is not in null(A^T)");
  }

  // x_star in range(A^T)
  const double xs = nrm2(p.x_star);
  if (xs > 0.0) {
    const double d = nrm2(sub(p.x_star, project_row_space(p.svd, p.x_star)));
    if (d > 1e-8 * xs) fail(Errc::invalid_argument, "problem: x_star is not in range(A^T)");
  }
}

Problem make_problem(Matrix a, Vec b, Vec x_star, Vec z) {
  Problem p;
  p.a = std::move(a);
  p.b = std::move(b);
  p.x_star = std::move(x_star);
  p.z = std::move(z);
  p.svd = svd(p.a);
  validate_problem(p);
  return p;
}

Problem gen_paper_problem(index_t n, double shift, double perturb, index_t zero_rows, RngStream& rng) {
  if (n < 3) fail(Errc::invalid_argument, "gen_paper_problem: n must be at least 3");
  if (zero_rows < 0) fail(Errc::invalid_argument, "gen_paper_problem: negative zero_rows");

  const index_t m = n + zero_rows;
  Matrix a(m, n);
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < n; ++j) a(i, j) = rng.next_gaussian() + (i == j ? shift : 0.0);

  // last generated row := previous row with `perturb` added to every entry
  for (index_t j = 0; j < n; ++j) a(n - 1, j) = a(n - 2, j) + perturb;

  for (index_t i = 0; i < n; ++i) {
    const double rn = std::sqrt(row_sq_norm(a, i));
    if (rn == 0.0) fail(Errc::degenerate, "gen_paper_problem: zero row before normalization");
    for (index_t j = 0; j < n; ++j) a(i, j) /= rn;
  }
  // rows n .. m-1 stay zero

  Problem p;
  p.a = std::move(a);
  p.svd = svd(p.a);
  p.x_star = project_row_space(p.svd, gaussian_vec(n, rng));
  p.z = make_null_t_vector(p.svd, rng);
  p.b = matvec(p.a, p.x_star);
  axpy(1.0, p.z, p.b);

  p.generator = "paper";
  p.seed = rng.seed();
  std::ostringstream os;
  os << "n=" << n << " shift=" << format_real(shift) << " perturb=" << format_real(perturb)
     << " zero_rows=" << zero_rows;
  p.params = os.str();
  validate_problem(p);
  return p;
}

Problem gen_synthetic(index_t m, index_t n, const Vec& spectrum, bool inconsistent, RngStream& rng) {
  if (m < 1 || n < 1) fail(Errc::invalid_argument, "gen_synthetic: empty shape");
  if (spectrum.empty() || static_cast<index_t>(spectrum.size()) > std::min(m, n))
    fail(Errc::invalid_argument, "gen_synthetic: spectrum length must be in [1, min(m, n)]");
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (!(spectrum[i] >= 0.0)) fail(Errc::invalid_argument, "gen_synthetic: spectrum must be nonnegative");
    if (i > 0 && spectrum[i] > spectrum[i - 1])
      fail(Errc::invalid_argument, "gen_synthetic: spectrum must be nonincreasing");
  }

  const Matrix u = haar_orthogonal(m, rng);
  const Matrix v = haar_orthogonal(n, rng);
  Matrix a(m, n);
  for (index_t i = 0; i < m; ++i)
    for (index_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t ell = 0; ell < spectrum.size(); ++ell)
        s += spectrum[ell] * u(i, static_cast<index_t>(ell)) * v(j, static_cast<index_t>(ell));
      a(i, j) = s;
    }

  Problem p;
  p.a = std::move(a);
  p.svd = svd(p.a);

  if (inconsistent && p.svd.rank >= m)
    fail(Errc::invalid_argument, "gen_synthetic: inconsistent instance requires rank < m");

  p.x_star = project_row_space(p.svd, gaussian_vec(n, rng));
  p.z = inconsistent ? make_null_t_vector(p.svd, rng) : Vec(static_cast<std::size_t>(m), 0.0);
  if (inconsistent && nrm2(p.z) == 0.0)
    fail(Errc::degenerate, "gen_synthetic: null(A^T) is numerically empty");
  p.b = matvec(p.a, p.x_star);
  axpy(1.0, p.z, p.b);

  p.generator = "synthetic";
  p.seed = rng.seed();
  std::ostringstream os;
  os << "m=" << m << " n=" << n << " inconsistent=" << (inconsistent ? 1 : 0) << " spectrum=";
  for (std::size_t i = 0; i < spectrum.size(); ++i) os << (i ? "," : "") << format_real(spectrum[i]);
  p.params = os.str();
  validate_problem(p);
  return p;
}

Matrix haar_orthogonal(index_t dim, RngStream& rng) {
  // QR of a Gaussian matrix via modified Gram-Schmidt; the positive-diagonal
  // convention of MGS makes Q Haar-distributed.
  Matrix g(dim, dim);
  for (index_t i = 0; i < dim; ++i)
    for (index_t j = 0; j < dim; ++j) g(i, j) = rng.next_gaussian();

  for (index_t j = 0; j < dim; ++j) {
    for (index_t k = 0; k < j; ++k) {
      double d = 0.0;
      for (index_t i = 0; i < dim; ++i) d += g(i, k) * g(i, j);
      for (index_t i = 0; i < dim; ++i) g(i, j) -= d * g(i, k);
    }
    double cn = 0.0;
    for (index_t i = 0; i < dim; ++i) cn += g(i, j) * g(i, j);
    cn = std::sqrt(cn);
    if (cn == 0.0) fail(Errc::numeric, "haar_orthogonal: rank collapse");
    for (index_t i = 0; i < dim; ++i) g(i, j) /= cn;
  }
  return g;
}

void save_problem(const Problem& p, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(Errc::io, "cannot create directory " + dir);

  const fs::path base(dir);
  write_matrix_mm((base / "A.mtx").string(), p.a, "system matrix");
  write_vector_mm((base / "b.mtx").string(), p.b, "right-hand side");
  write_vector_mm((base / "xstar.mtx").string(), p.x_star, "minimum-norm least squares solution");
  write_vector_mm((base / "z.mtx").string(), p.z, "null(A^T) component of b");

  std::ofstream mf(base / "manifest.txt");
  if (!mf) fail(Errc::io, "cannot write manifest in " + dir);
  mf << "kind=problem\n";
  mf << "m=" << p.m() << "\n";
  mf << "n=" << p.n() << "\n";
  mf << "generator=" << (p.generator.empty() ? "file" : p.generator) << "\n";
  mf << "seed=" << p.seed << "\n";
  mf << "params=" << p.params << "\n";
  mf << "rank=" << p.svd.rank << "\n";
  mf << "sigma_max=" << format_real(p.svd.rank > 0 ? p.svd.sigma[0] : 0.0) << "\n";
  mf << "sigma_min_pos=" << format_real(p.svd.rank > 0 ? p.svd.sigma_min_pos() : 0.0) << "\n";
  if (!mf) fail(Errc::io, "manifest write failed in " + dir);
}

Problem load_problem(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path base(dir);
  if (!fs::is_directory(base)) fail(Errc::io, dir + " is not a problem directory");

  Problem p;
  p.a = read_matrix_mm((base / "A.mtx").string());
  p.b = read_vector_mm((base / "b.mtx").string());
  p.x_star = read_vector_mm((base / "xstar.mtx").string());
  p.z = read_vector_mm((base / "z.mtx").string());
  p.svd = svd(p.a);
  p.generator = "file";
  p.params = "dir=" + dir;

  std::ifstream mf(base / "manifest.txt");
  if (mf) {
    std::string line;
    while (std::getline(mf, line)) {
      if (line.rfind("seed=", 0) == 0) p.seed = std::strtoull(line.c_str() + 5, nullptr, 10);
      if (line.rfind("generator=", 0) == 0) p.generator = line.substr(10);
    }
  }
  validate_problem(p);
  return p;
}

}  // namespace klab
