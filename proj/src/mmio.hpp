#pragma once

#include <string>

#include "matrix.hpp"

namespace klab {

// MatrixMarket "array" format (real, general), the interchange format for
// all CLI commands. Entries are written column-major with 17 significant
// digits, which round-trips real64 exactly. Vectors are m x 1 arrays.

Matrix read_matrix_mm(const std::string& path);
void write_matrix_mm(const std::string& path, const Matrix& a, const std::string& comment = "");

Vec read_vector_mm(const std::string& path);
void write_vector_mm(const std::string& path, const Vec& v, const std::string& comment = "");

// 17-significant-digit decimal form shared by the mm writer and the CLI
std::string format_real(double x);

}  // namespace klab
