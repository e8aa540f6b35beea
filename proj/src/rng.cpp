#include "rng.hpp"

#include <cmath>

namespace klab {

namespace {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ull;

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      key1_(mix64(seed + kGolden)),
      key2_(mix64(key1_ ^ mix64(stream_id + kStreamSalt))) {}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t z = mix64(counter_++ + key1_);
  return mix64(z ^ key2_);
}

double RngStream::next_unit() {
  // top 53 bits -> [0, 1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  const double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  cached_gaussian_ = r * std::sin(a);
  has_cached_gaussian_ = true;
  return r * std::cos(a);
}

RngStream derive_stream(std::uint64_t seed, std::uint64_t trial) { return RngStream(seed, trial); }

}  // namespace klab
