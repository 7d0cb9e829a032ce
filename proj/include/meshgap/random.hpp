#pragma once

#include <cstdint>
#include <random>

#include "meshgap/geometry.hpp"

namespace meshgap {

/// Reproducible random stream.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Doubles use the top 53 bits of one draw, u = (x >> 11) * 2^-53,
/// giving [0, 1). Gaussian draws use the basic Box-Muller transform on two
/// such draws, u1 -> 1 - u1 so the logarithm argument lies in (0, 1]; both
/// outputs of a pair are used, cosine branch first. No standard library
/// distribution is involved, so streams do not depend on the library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from (seed, stream) via SplitMix64.
  static Rng derived(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  double normal();
  Vec3 normal3() {
    const double x = normal();
    const double y = normal();
    const double z = normal();
    return {x, y, z};
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Uniformly distributed rotation (from a random unit quaternion).
Mat3 random_rotation(Rng& rng);

}  // namespace meshgap
