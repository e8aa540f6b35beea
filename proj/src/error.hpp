#pragma once

#include <stdexcept>
#include <string>

namespace klab {

enum class Errc {
  invalid_argument = 1,
  dimension_mismatch = 2,
  degenerate = 3,
  budget_exceeded = 4,
  io = 5,
  numeric = 6,
};

// Library-wide exception; the C API maps Errc onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace klab
