#include "matrix.hpp"

#include <cmath>
#include <cstddef>

#include "error.hpp"

namespace klab {

Matrix::Matrix(index_t rows, index_t cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) fail(Errc::invalid_argument, "matrix: negative dimension");
  entries_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
}

Matrix::Matrix(index_t rows, index_t cols, Vec entries) : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 0 || cols < 0) fail(Errc::invalid_argument, "matrix: negative dimension");
  if (entries_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    fail(Errc::dimension_mismatch, "matrix: entries length does not equal rows*cols");
}

Matrix Matrix::identity(index_t n) {
  Matrix a(n, n);
  for (index_t i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const index_t m = static_cast<index_t>(rows.size());
  const index_t n = m > 0 ? static_cast<index_t>(rows.begin()->size()) : 0;
  Matrix a(m, n);
  index_t i = 0;
  for (const auto& r : rows) {
    if (static_cast<index_t>(r.size()) != n) fail(Errc::dimension_mismatch, "from_rows: ragged rows");
    index_t j = 0;
    for (double v : r) a(i, j++) = v;
    ++i;
  }
  return a;
}

Vec Matrix::col(index_t j) const {
  Vec c(static_cast<std::size_t>(rows_));
  for (index_t i = 0; i < rows_; ++i) c[static_cast<std::size_t>(i)] = (*this)(i, j);
  return c;
}

bool Matrix::all_finite() const { return klab::all_finite(entries_); }

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Vec matvec(const Matrix& a, const Vec& x) {
  if (static_cast<index_t>(x.size()) != a.cols()) fail(Errc::dimension_mismatch, "matvec: size mismatch");
  Vec y(static_cast<std::size_t>(a.rows()), 0.0);
  for (index_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row_ptr(i);
    double s = 0.0;
    for (index_t j = 0; j < a.cols(); ++j) s += row[j] * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

Vec matvec_t(const Matrix& a, const Vec& y) {
  if (static_cast<index_t>(y.size()) != a.rows()) fail(Errc::dimension_mismatch, "matvec_t: size mismatch");
  Vec x(static_cast<std::size_t>(a.cols()), 0.0);
  for (index_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row_ptr(i);
    const double yi = y[static_cast<std::size_t>(i)];
    if (yi == 0.0) continue;
    for (index_t j = 0; j < a.cols(); ++j) x[static_cast<std::size_t>(j)] += row[j] * yi;
  }
  return x;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.entries()) s += v * v;
  return std::sqrt(s);
}

double row_sq_norm(const Matrix& a, index_t i) {
  const double* row = a.row_ptr(i);
  double s = 0.0;
  for (index_t j = 0; j < a.cols(); ++j) s += row[j] * row[j];
  return s;
}

double col_sq_norm(const Matrix& a, index_t j) {
  double s = 0.0;
  for (index_t i = 0; i < a.rows(); ++i) {
    const double v = a(i, j);
    s += v * v;
  }
  return s;
}

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) fail(Errc::dimension_mismatch, "dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double nrm2(const Vec& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Vec& a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

void axpy(double alpha, const Vec& x, Vec& y) {
  if (x.size() != y.size()) fail(Errc::dimension_mismatch, "axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vec sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) fail(Errc::dimension_mismatch, "sub: size mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace klab
