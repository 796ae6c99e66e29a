#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "sparsekit/types.hpp"

namespace sparsekit {

/// SplitMix64 stream generator (Steele, Lea & Flood's reference update).
///
/// Chosen as the instance-generation PRNG because the whole algorithm fits in
/// four lines and can be re-implemented bit-for-bit in any language; the
/// exact draw recipes below are part of the instance file contract (README,
/// "Determinism").
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // 53-bit uniform on (0, 1]; never returns 0 so log() below is safe.
  double uniform01() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller, cosine branch only: each draw consumes
  // exactly two uniforms, so the stream position is draw-count predictable.
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform integer in [0, bound) by 128-bit multiply-shift.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates shuffle of 0..n-1, swapping from the back: for i = n-1..1,
/// j = below(i + 1), swap v[i], v[j].
inline std::vector<Index> fisher_yates_permutation(Index n, SplitMix64& rng) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
  }
  return v;
}

}  // namespace sparsekit
