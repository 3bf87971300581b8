#include "apps/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace algdiff {

double reconstruct_theta_m(double y, double ydd, const ManipulatorParams& p) {
  if (!std::isfinite(y) || !std::isfinite(ydd))
    throw std::invalid_argument("non-finite reconstructor input");
  return (p.link_inertia * ydd + p.mgh() * std::sin(y)) / p.spring + y;
}

void InertiaRegression::add_block(const std::array<double, 3>& w,
                                  const std::array<double, 3>& wdot,
                                  const std::array<double, 3>& u) {
  const double rows[3][3] = {
      {wdot[0], -w[1] * w[2], w[1] * w[2]},
      {w[0] * w[2], wdot[1], -w[0] * w[2]},
      {-w[0] * w[1], w[0] * w[1], wdot[2]},
  };
  for (int r = 0; r < 3; ++r) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) ata_[i][j] += rows[r][i] * rows[r][j];
      atb_[i] += rows[r][i] * u[r];
    }
  }
  ++blocks_;
}

std::optional<std::array<double, 3>> InertiaRegression::solve(
    double condition_limit, double wdot_noise_var) const {
  if (blocks_ == 0) return std::nullopt;
  // Each block contributes wdot_i to exactly one row of column i, so the
  // expected noise inflation sits on the diagonal of A^T A.
  auto a = ata_;
  for (int i = 0; i < 3; ++i)
    a[i][i] -= static_cast<double>(blocks_) * wdot_noise_var;
  const double det =
      a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
      a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
      a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  if (det == 0.0 || !std::isfinite(det)) return std::nullopt;

  double inv[3][3];
  inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
  inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
  inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
  inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
  inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
  inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
  inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
  inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
  inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;

  double norm_a = 0.0, norm_inv = 0.0;
  for (int i = 0; i < 3; ++i) {
    double ra = 0.0, ri = 0.0;
    for (int j = 0; j < 3; ++j) {
      ra += std::abs(a[i][j]);
      ri += std::abs(inv[i][j]);
    }
    norm_a = std::max(norm_a, ra);
    norm_inv = std::max(norm_inv, ri);
  }
  if (norm_a * norm_inv > condition_limit) return std::nullopt;

  std::array<double, 3> x{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) x[i] += inv[i][j] * atb_[j];
  return x;
}

TankFlatPoint tank_flat_inverse(double y, double yd, double ydd, const TankParams& p) {
  if (!(y > 0)) throw std::invalid_argument("tank output must be positive: y <= 0");
  const double root = p.area / p.outflow * yd + std::sqrt(y);
  if (root < 0)
    throw std::invalid_argument("flow regime violated: A/c*yd + sqrt(y) < 0");
  TankFlatPoint out;
  out.x1 = root * root;
  out.u = 2.0 * p.area * root * (p.area / p.outflow * ydd + yd / (2.0 * std::sqrt(y))) +
          p.outflow * root;
  return out;
}

std::optional<double> estimate_varpi(const std::vector<double>& x1,
                                     const std::vector<double>& u, double h,
                                     const TankParams& p, double epsilon) {
  if (x1.size() != u.size())
    throw std::invalid_argument("mismatched perturbation-estimate traces");
  if (x1.size() < 2) return std::nullopt;
  const std::size_t n = x1.size();
  const double t = static_cast<double>(n - 1) * h;
  if (t <= epsilon) return std::nullopt;

  // 2 [ t x1(t) - integral_0^t ( x1 - sigma (c/A sqrt(x1) - u/A) ) ] / t^2
  double integral = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x1[i] < 0) throw std::invalid_argument("negative reconstructed tank level");
    const double sigma = static_cast<double>(i) * h;
    const double g = x1[i] - sigma * (p.outflow / p.area * std::sqrt(x1[i]) -
                                      u[i] / p.area);
    if (i > 0) integral += 0.5 * h * (prev + g);
    prev = g;
  }
  return 2.0 * (t * x1[n - 1] - integral) / (t * t);
}

std::optional<double> estimate_fault(double y, double yd, double ydd, double u,
                                     double varpi, const TankParams& p,
                                     double u_threshold, double w_min, double w_max) {
  if (!(y > 0)) throw std::invalid_argument("tank output must be positive: y <= 0");
  if (std::abs(u) < u_threshold) return std::nullopt;
  const double root = p.area / p.outflow * yd + std::sqrt(y);
  const double nominal =
      2.0 * p.area * root * (p.area / p.outflow * ydd + yd / (2.0 * std::sqrt(y))) +
      p.outflow * root - p.area * varpi;
  const double w = 1.0 - nominal / u;
  return std::clamp(w, w_min, w_max);
}

double estimate_z(double y, double yd, double ydd, double u, PertPlantKind kind) {
  if (!std::isfinite(y) || !std::isfinite(yd) || !std::isfinite(ydd) || !std::isfinite(u))
    throw std::invalid_argument("non-finite estimator input");
  if (kind == PertPlantKind::linear) return u - ydd - y;
  return u - ydd - y * yd;
}

}  // namespace algdiff
