#pragma once

#include <cmath>
#include <cstdint>

namespace volest {

// Deterministic counter-based generator with cheap stream splitting.
//
// Every value is a fixed 64-bit mix of (key, counter), so a stream is fully
// determined by its key: identical (seed, stream path) gives an identical
// sequence on every run, thread count and platform. Streams derived via
// stream(i) are statistically independent of the parent and of each other.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  // Independent child stream; does not advance this stream.
  [[nodiscard]] RngStream stream(std::uint64_t index) const {
    RngStream child(0);
    child.key_ = mix(mix(key_ + 0x9e3779b97f4a7c15ULL * (index + 1)) ^ index);
    child.counter_ = 0;
    child.has_cached_gauss_ = false;
    return child;
  }

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix(key_ ^ counter_);
  }

  // Uniform on [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; second value of each pair is cached.
  double next_gaussian() {
    if (has_cached_gauss_) {
      has_cached_gauss_ = false;
      return cached_gauss_;
    }
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    cached_gauss_ = r * std::sin(t);
    has_cached_gauss_ = true;
    return r * std::cos(t);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_gauss_ = 0.0;
  bool has_cached_gauss_ = false;
};

}  // namespace volest
