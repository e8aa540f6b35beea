#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "error.hpp"
#include "mmio.hpp"
#include "rng.hpp"
#include "test_util.hpp"

using namespace klab;
using klab::test::TempDir;

TEST_CASE("matrix round-trip is exact") {
  TempDir tmp;
  RngStream rng(4, 0);
  Matrix a(5, 3);
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t j = 0; j < a.cols(); ++j) a(i, j) = rng.next_gaussian() * std::pow(10.0, (i - 2) * 3);

  write_matrix_mm(tmp.file("a.mtx"), a, "test payload");
  Matrix back = read_matrix_mm(tmp.file("a.mtx"));
  REQUIRE(back.rows() == a.rows());
  REQUIRE(back.cols() == a.cols());
  CHECK(back.entries() == a.entries());  // bitwise, 17 digits round-trip
}

TEST_CASE("vector round-trip") {
  TempDir tmp;
  Vec v{1.5, -2.25, 1e-300, 3.141592653589793};
  write_vector_mm(tmp.file("v.mtx"), v);
  CHECK(read_vector_mm(tmp.file("v.mtx")) == v);
}

TEST_CASE("header and shape validation") {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("bad_header.mtx"));
    f << "%%MatrixMarket matrix coordinate real general\n2 2 4\n";
  }
  CHECK_THROWS_AS(read_matrix_mm(tmp.file("bad_header.mtx")), Error);

  {
    std::ofstream f(tmp.file("short.mtx"));
    f << "%%MatrixMarket matrix array real general\n2 2\n1.0\n2.0\n3.0\n";
  }
  CHECK_THROWS_AS(read_matrix_mm(tmp.file("short.mtx")), Error);

  {
    std::ofstream f(tmp.file("long.mtx"));
    f << "%%MatrixMarket matrix array real general\n1 2\n1.0\n2.0\n3.0\n";
  }
  CHECK_THROWS_AS(read_matrix_mm(tmp.file("long.mtx")), Error);

  {
    std::ofstream f(tmp.file("nan.mtx"));
    f << "%%MatrixMarket matrix array real general\n1 2\n1.0\nnan\n";
  }
  CHECK_THROWS_AS(read_matrix_mm(tmp.file("nan.mtx")), Error);

  CHECK_THROWS_AS(read_matrix_mm(tmp.file("missing.mtx")), Error);

  {
    std::ofstream f(tmp.file("not_vector.mtx"));
    f << "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n";
  }
  CHECK_THROWS_AS(read_vector_mm(tmp.file("not_vector.mtx")), Error);
}

TEST_CASE("comment lines are skipped") {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("c.mtx"));
    f << "%%MatrixMarket matrix array real general\n% one comment\n% another\n2 1\n1.5\n-2\n";
  }
  Vec v = read_vector_mm(tmp.file("c.mtx"));
  CHECK(v == Vec{1.5, -2.0});
}

TEST_CASE("column-major entry order") {
  TempDir tmp;
  Matrix a = Matrix::from_rows({{1.0, 3.0}, {2.0, 4.0}});
  write_matrix_mm(tmp.file("cm.mtx"), a);
  std::ifstream f(tmp.file("cm.mtx"));
  std::string line;
  std::getline(f, line);  // header
  std::getline(f, line);  // comment written? no comment -> size line
  CHECK(line == "2 2");
  double v1, v2, v3, v4;
  f >> v1 >> v2 >> v3 >> v4;
  CHECK(Vec{v1, v2, v3, v4} == Vec{1.0, 2.0, 3.0, 4.0});
}
