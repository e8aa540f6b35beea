#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace klab {

using index_t = std::int64_t;
using Vec = std::vector<double>;

// Dense real matrix, row-major storage.
class Matrix {
 public:
  Matrix() = default;
  Matrix(index_t rows, index_t cols);  // zero-filled
  Matrix(index_t rows, index_t cols, Vec entries);

  static Matrix identity(index_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }

  double& operator()(index_t i, index_t j) { return entries_[i * cols_ + j]; }
  double operator()(index_t i, index_t j) const { return entries_[i * cols_ + j]; }

  double* row_ptr(index_t i) { return entries_.data() + i * cols_; }
  const double* row_ptr(index_t i) const { return entries_.data() + i * cols_; }

  Vec col(index_t j) const;

  const Vec& entries() const { return entries_; }
  bool all_finite() const;

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  Vec entries_;
};

Matrix transpose(const Matrix& a);
Vec matvec(const Matrix& a, const Vec& x);    // A x
Vec matvec_t(const Matrix& a, const Vec& y);  // A^T y

double frobenius_norm(const Matrix& a);
double row_sq_norm(const Matrix& a, index_t i);
double col_sq_norm(const Matrix& a, index_t j);

// vector helpers
double dot(const Vec& a, const Vec& b);
double nrm2(const Vec& a);
double max_abs(const Vec& a);
void axpy(double alpha, const Vec& x, Vec& y);  // y += alpha * x
Vec sub(const Vec& a, const Vec& b);
bool all_finite(const Vec& a);

}  // namespace klab
