#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace expmoment {

// Seeded random source with outputs that are identical on every platform.
// std::mt19937_64 itself is fully specified by the standard, but the standard
// distributions are not, so uniforms and normals are derived here by hand.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; generates values in pairs.
  double normal();

  // Index i drawn with probability cumulative[i] - cumulative[i-1].
  // cumulative must be nondecreasing with final entry 1.
  std::size_t sample_index(std::span<const double> cumulative);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace expmoment
