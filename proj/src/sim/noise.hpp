#pragma once

#include <cstdint>
#include <vector>

namespace algdiff {

/// SplitMix64 counter generator. Chosen over std::mt19937 because its
/// output is specified by a handful of arithmetic ops and reproduces
/// bit-identically on any conforming platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0,1), from the top 53 bits.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Zero-mean Gaussian stream, Box-Muller over SplitMix64.
class GaussianNoise {
 public:
  explicit GaussianNoise(const NoiseSpec& spec) : rng_(spec.seed), sigma_(spec.sigma) {}

  double next();

 private:
  SplitMix64 rng_;
  double sigma_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

std::vector<double> gaussian_noise(const NoiseSpec& spec, std::size_t count);

}  // namespace algdiff
