#pragma once

#include <cstdint>

namespace beampinn {

/// Counter-based uniform generator: draw i of stream s under seed k is a pure
/// function of (k, s, i), so categories drawn from distinct streams never
/// perturb each other and results do not depend on call order elsewhere.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  /// Uniform double in [0, 1) built from the top 53 bits.
  double uniform() noexcept { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  std::uint64_t bits() noexcept { return mix(key_ + counter_++ * 0x9e3779b97f4a7c15ULL); }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  // SplitMix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream identifiers; one per independent draw category.
namespace streams {
inline constexpr std::uint64_t kInterior = 1;
inline constexpr std::uint64_t kBoundary = 2;
inline constexpr std::uint64_t kInitial = 3;
inline constexpr std::uint64_t kSensor = 4;
inline constexpr std::uint64_t kInitWeights = 16;  // + layer index
}  // namespace streams

}  // namespace beampinn
