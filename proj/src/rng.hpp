#pragma once

#include <cstdint>

namespace klab {

// Counter-based 64-bit generator. Each output is a fixed avalanche mix of
// (key, counter), where the key is derived from (seed, stream_id); streams
// with distinct ids are unrelated permutations rather than offsets of one
// sequence, so per-trial streams are independent by construction. All
// arithmetic is exact 64-bit integer work, identical on every platform.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  double next_unit();      // uniform in [0, 1), 53-bit mantissa
  double next_gaussian();  // standard normal via Box-Muller

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key1_;
  std::uint64_t key2_;
  std::uint64_t counter_ = 0;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

// One independent stream per Monte Carlo trial.
RngStream derive_stream(std::uint64_t seed, std::uint64_t trial);

}  // namespace klab
