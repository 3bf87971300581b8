#include "sim/trace.hpp"

#include <cmath>

namespace algdiff {

double rms_error(const std::vector<double>& t, const std::vector<double>& a,
                 const std::vector<double>& b, double t0, double t1) {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    const double d = a[i] - b[i];
    if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();
    acc += d * d;
    ++n;
  }
  if (n == 0) return 0.0;
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace algdiff
