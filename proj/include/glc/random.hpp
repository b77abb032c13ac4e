#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace glc {

std::uint64_t splitmix64(std::uint64_t x);

/// Seedable portable random source: std::mt19937_64 (fully specified by the
/// standard) with hand-written uniform, integer and Gaussian transforms, so
/// a seed produces the same stream with any standard library.
///
/// Streams for independent instances are derived with stream(seed, k), which
/// seeds the engine with splitmix64(seed ^ splitmix64(k)).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t k) { return Rng(splitmix64(seed ^ splitmix64(k))); }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on {0, ..., n-1}, rejection sampled.
  std::size_t index(std::size_t n);
  /// Box-Muller; the second variate of each pair is cached.
  double normal(double mean = 0.0, double stddev = 1.0);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace glc
