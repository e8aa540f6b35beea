#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"
#include "svd.hpp"

namespace klab {

// A least-squares instance b = A x_star + z with x_star the minimum-norm
// solution (x_star in range(A^T)) and z in null(A^T); z = 0 when the system
// is consistent. Immutable after construction; the SVD rides along so that
// theory and measurement share one factorization.
struct Problem {
  Matrix a;
  Vec b;
  Vec x_star;
  Vec z;
  Svd svd;

  // generator metadata, recorded in the directory manifest
  std::string generator;  // "paper", "synthetic" or "file"
  std::string params;     // human-readable key=value list
  std::uint64_t seed = 0;

  index_t m() const { return a.rows(); }
  index_t n() const { return a.cols(); }
  bool consistent() const { return nrm2(z) == 0.0; }
};

// Throws when the instance invariants fail: b = A x_star + z, z in
// null(A^T), x_star in range(A^T).
void validate_problem(const Problem& p);

// Assembles a problem from parts, computing the SVD and validating.
Problem make_problem(Matrix a, Vec b, Vec x_star, Vec z);

// Scaled replica of the ill-conditioned demo construction: an n x n Gaussian
// matrix plus shift*I, last row replaced by the previous row with `perturb`
// added to every entry, rows normalized to unit norm, `zero_rows` zero rows
// appended. x_star is a Gaussian vector projected onto range(A^T); z is a
// unit-norm null(A^T) vector (zero if that space is empty).
Problem gen_paper_problem(index_t n, double shift, double perturb, index_t zero_rows, RngStream& rng);

// A = U diag(spectrum) V^T with Haar-random orthogonal U, V. `inconsistent`
// adds a unit-norm null(A^T) component to b and requires rank < m.
Problem gen_synthetic(index_t m, index_t n, const Vec& spectrum, bool inconsistent, RngStream& rng);

// Directory layout: A.mtx, b.mtx, xstar.mtx, z.mtx + manifest.txt
void save_problem(const Problem& p, const std::string& dir);
Problem load_problem(const std::string& dir);

// Haar-distributed orthogonal matrix (QR of a Gaussian matrix).
Matrix haar_orthogonal(index_t dim, RngStream& rng);

}  // namespace klab
