#include "core/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace algdiff {
namespace {

// Exact integer-valued factorials; orders are capped so every value is
// exactly representable in a double.
double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double binomial(int n, int k) {
  return factorial(n) / (factorial(k) * factorial(n - k));
}

int resolve_intervals(const EstimatorConfig& c) {
  if (c.taylor_order < 0 || c.taylor_order > EstimatorKernel::kMaxOrder)
    throw std::invalid_argument("taylor_order must be in [0, " +
                                std::to_string(EstimatorKernel::kMaxOrder) + "]");
  const int nbar = c.resolved_integral_order();
  if (nbar <= c.taylor_order)
    throw std::invalid_argument("integral_order must exceed taylor_order");
  if (nbar > c.taylor_order + 10)
    throw std::invalid_argument("integral_order too large (exact factorials exhausted)");
  if (!(c.window_length > 0) || !(c.sample_step > 0))
    throw std::invalid_argument("window_length and sample_step must be positive");
  const double ratio = c.window_length / c.sample_step;
  const int m = static_cast<int>(std::lround(ratio));
  if (m < 1 || std::abs(ratio - m) > 1e-6)
    throw std::invalid_argument("window_length must be an integer multiple of sample_step");
  if (m < c.taylor_order + 1)
    throw std::invalid_argument("window holds fewer than N+2 samples");
  return m;
}

// Trapezoid weights on m+1 uniform nodes spanning [0,1] with Gregory end
// corrections. The correction depth k (finite differences used at each end)
// is the largest the window supports, capped at 5; plain trapezoid error is
// O(h^2) and each difference order buys one more power of h, which the
// back-substitution amplifies enough to matter.
std::vector<double> gregory_weights(int m) {
  static const std::vector<std::vector<double>> ends = {
      {},
      {5.0 / 12, 13.0 / 12},
      {3.0 / 8, 7.0 / 6, 23.0 / 24},
      {251.0 / 720, 299.0 / 240, 211.0 / 240, 739.0 / 720},
      {95.0 / 288, 317.0 / 240, 23.0 / 30, 793.0 / 720, 157.0 / 160},
      {19087.0 / 60480, 84199.0 / 60480, 18869.0 / 30240, 37621.0 / 30240,
       55031.0 / 60480, 61343.0 / 60480},
  };
  int k = 5;
  while (k > 0 && 2 * (k + 1) > m + 1) --k;
  const double hh = 1.0 / m;
  std::vector<double> w(m + 1, hh);
  w.front() = w.back() = 0.5 * hh;
  const auto& e = ends[k];
  for (std::size_t i = 0; i < e.size(); ++i) {
    w[i] = hh * e[i];
    w[m - i] = hh * e[i];
  }
  return w;
}

}  // namespace

EstimatorKernel::EstimatorKernel(const EstimatorConfig& config)
    : config_(config), intervals_(resolve_intervals(config)) {
  const int n = config_.taylor_order;
  const int nbar = config_.resolved_integral_order();
  const int m_count = intervals_;
  const double hh = 1.0 / m_count;  // normalized step, window mapped to [0,1]
  const std::vector<double> quad = gregory_weights(m_count);

  lhs_weights_.assign(n + 1, std::vector<double>(m_count + 1, 0.0));
  rhs_.assign(n + 1, std::vector<double>(n + 1, 0.0));

  // Equation a realizes s^-Nbar d^a/ds^a (s^(N+1) X) in the time domain.
  // Leibniz term j carries an (Nbar - (N+1-j))-fold iterated integral of
  // (-tau)^(a-j) x(tau); the Cauchy kernel and the power of -tau fold into
  // a single weight per sample.
  for (int a = 0; a <= n; ++a) {
    for (int j = 0; j <= a; ++j) {
      const double coef = binomial(a, j) * factorial(n + 1) / factorial(n + 1 - j);
      const int order = nbar - (n + 1 - j);
      const int pow_t = a - j;
      if (order == 0) {
        // point evaluation at the window end, tau = 1
        lhs_weights_[a][m_count] += coef * ((pow_t % 2 == 0) ? 1.0 : -1.0);
        continue;
      }
      const double kfact = factorial(order - 1);
      auto integrand = [&](int i) {
        const double tau = i * hh;
        return std::pow(1.0 - tau, order - 1) / kfact *
               ((pow_t % 2 == 0) ? 1.0 : -1.0) * std::pow(tau, pow_t);
      };
      for (int i = 0; i <= m_count; ++i)
        lhs_weights_[a][i] += coef * quad[i] * integrand(i);
    }
    for (int v = 0; v <= n - a; ++v) {
      const int order = nbar + a + v - n;
      rhs_[a][v] = factorial(n - v) / factorial(n - v - a) / factorial(order - 1);
    }
  }
}

std::vector<double> EstimatorKernel::iterated_integral_weights(int m) const {
  if (m < 1) throw std::invalid_argument("iterated integral order must be >= 1");
  const int mc = intervals_;
  const double hh = 1.0 / mc;
  const double kfact = factorial(m - 1);
  auto kernel = [&](int i) {
    return std::pow(1.0 - i * hh, m - 1) / kfact;
  };
  std::vector<double> w = gregory_weights(mc);
  for (int i = 0; i <= mc; ++i) w[i] *= kernel(i);
  return w;
}

DerivativeEstimate EstimatorKernel::estimate(const std::vector<double>& samples) const {
  const int n = config_.taylor_order;
  if (static_cast<int>(samples.size()) != intervals_ + 1)
    throw std::invalid_argument("sample count does not match kernel window");
  for (double s : samples)
    if (!std::isfinite(s)) throw std::invalid_argument("non-finite sample value");

  DerivativeEstimate out;
  out.anchor_time = 0.0;
  out.delay = config_.window_length;
  out.values.assign(n + 1, 0.0);

  // Back substitution from equation a = N (single unknown) upward.
  for (int a = n; a >= 0; --a) {
    double lhs = 0.0;
    const auto& w = lhs_weights_[a];
    for (int i = 0; i <= intervals_; ++i) lhs += w[i] * samples[i];
    const int idx = n - a;
    for (int v = 0; v < idx; ++v) lhs -= rhs_[a][v] * out.values[v];
    const double diag = rhs_[a][idx];
    if (diag == 0.0) throw std::runtime_error("singular diagonal in estimator system");
    out.values[idx] = lhs / diag;
  }

  // Derivatives were computed on the normalized window; undo the scaling.
  const double t_len = config_.window_length;
  double scale = 1.0;
  for (int v = 1; v <= n; ++v) {
    scale /= t_len;
    out.values[v] *= scale;
  }
  return out;
}

}  // namespace algdiff
