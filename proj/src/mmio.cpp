#include "mmio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace klab {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Matrix read_matrix_mm(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) fail(Errc::io, path + ": empty file");
  std::istringstream hdr(line);
  std::string banner, object, format, field, symmetry;
  hdr >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "array" ||
      lower(field) != "real" || lower(symmetry) != "general")
    fail(Errc::io, path + ": expected '%%MatrixMarket matrix array real general' header");

  do {
    if (!std::getline(in, line)) fail(Errc::io, path + ": missing size line");
  } while (!line.empty() && line[0] == '%');

  std::istringstream size_line(line);
  index_t m = 0, n = 0;
  if (!(size_line >> m >> n) || m < 1 || n < 1) fail(Errc::io, path + ": bad size line");

  Matrix a(m, n);
  for (index_t j = 0; j < n; ++j) {  // array format is column-major
    for (index_t i = 0; i < m; ++i) {
      double v = 0.0;
      if (!(in >> v)) fail(Errc::io, path + ": truncated entry list");
      if (!std::isfinite(v)) fail(Errc::io, path + ": non-finite entry");
      a(i, j) = v;
    }
  }
  double extra;
  if (in >> extra) fail(Errc::io, path + ": trailing entries beyond rows*cols");
  return a;
}

void write_matrix_mm(const std::string& path, const Matrix& a, const std::string& comment) {
  if (a.rows() < 1 || a.cols() < 1) fail(Errc::invalid_argument, "write_matrix_mm: empty matrix");
  if (!a.all_finite()) fail(Errc::numeric, "write_matrix_mm: non-finite entries");
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot write " + path);
  out << "%%MatrixMarket matrix array real general\n";
  if (!comment.empty()) out << "% " << comment << "\n";
  out << a.rows() << " " << a.cols() << "\n";
  for (index_t j = 0; j < a.cols(); ++j)
    for (index_t i = 0; i < a.rows(); ++i) out << format_real(a(i, j)) << "\n";
  if (!out) fail(Errc::io, "write failed for " + path);
}

Vec read_vector_mm(const std::string& path) {
  Matrix a = read_matrix_mm(path);
  if (a.cols() != 1) fail(Errc::io, path + ": expected a single-column array");
  return a.entries();
}

void write_vector_mm(const std::string& path, const Vec& v, const std::string& comment) {
  write_matrix_mm(path, Matrix(static_cast<index_t>(v.size()), 1, v), comment);
}

}  // namespace klab
