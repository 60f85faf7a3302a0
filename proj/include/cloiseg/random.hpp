#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cloiseg {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the k-th output is mix64(key + (k+1) * gamma),
/// i.e. the SplitMix64 stream. Outputs depend only on (key, k), so streams are
/// identical on every platform and any substream can be derived without
/// advancing a shared state.
///
/// The derived distributions are fixed here rather than taken from <random>,
/// whose distribution algorithms vary between standard libraries.
class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

  /// Independent stream for (seed, stream) pairs, e.g. one per shape.
  static constexpr CounterRng derive(std::uint64_t seed, std::uint64_t stream) {
    return CounterRng(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL)));
  }

  constexpr std::uint64_t next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
  }

  /// Uniform in [0, 1) with 53 random bits.
  constexpr double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  constexpr double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in [0, n); n > 0. Unbiased (rejection on the top range).
  constexpr std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  /// Standard normal via Box-Muller; consumes two outputs per call.
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  constexpr std::uint64_t key() const { return key_; }
  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cloiseg
