#include "sim/noise.hpp"

#include <cmath>

namespace algdiff {

double GaussianNoise::next() {
  if (sigma_ == 0.0) return 0.0;
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = rng_.next_uniform();
  const double u2 = rng_.next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_ = sigma_ * r * std::sin(theta);
  has_cached_ = true;
  return sigma_ * r * std::cos(theta);
}

std::vector<double> gaussian_noise(const NoiseSpec& spec, std::size_t count) {
  GaussianNoise gen(spec);
  std::vector<double> out(count);
  for (auto& v : out) v = gen.next();
  return out;
}

}  // namespace algdiff
