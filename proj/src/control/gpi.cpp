#include "control/gpi.hpp"

#include <cmath>

namespace algdiff {

double GpiFilter::apply(double e, double h) {
  // Controllable canonical form of the strictly proper part:
  //   x1' = x2, x2' = -l3 x2 + e, y = l0 x1 + (l1 - l2 l3) x2 + l2 e
  auto f1 = [](double, double x2v) { return x2v; };
  auto f2 = [&](double x2v) { return -l3_ * x2v + e; };

  const double k1a = f1(x1_, x2_), k1b = f2(x2_);
  const double k2a = x2_ + 0.5 * h * k1b, k2b = f2(x2_ + 0.5 * h * k1b);
  const double k3a = x2_ + 0.5 * h * k2b, k3b = f2(x2_ + 0.5 * h * k2b);
  const double k4a = x2_ + h * k3b, k4b = f2(x2_ + h * k3b);

  x1_ += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
  x2_ += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);

  return l0_ * x1_ + (l1_ - l2_ * l3_) * x2_ + l2_ * e;
}

double GpiFilter::step_response(double t) const {
  // G(s)/s = A/s^2 + B/s + C/(s + l3)
  const double a = l0_ / l3_;
  const double c = (l2_ * l3_ * l3_ - l1_ * l3_ + l0_) / (l3_ * l3_);
  const double b = l2_ - c;
  return a * t + b + c * std::exp(-l3_ * t);
}

}  // namespace algdiff
