#pragma once

#include <cstdint>
#include <random>

namespace imf {

/// Seeded 64-bit generator. All stochastic paths draw from one of these, with
/// sub-streams derived from the run seed by `Rng::derive`.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

  std::uint64_t next() noexcept { return engine_(); }

  /// Independent seed for sub-stream `stream` of `seed` (splitmix64 mixing).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace imf
