#include "control/laws.hpp"

#include <cmath>
#include <stdexcept>

namespace algdiff {

double manipulator_aux_input(double y, double yd, double ydd, double yddd,
                             const RefPoint& ref, const ManipulatorGains& g) {
  return ref[4] - g.g4 * (yddd - ref[3]) - g.g3 * (ydd - ref[2]) -
         g.g2 * (yd - ref[1]) - g.g1 * (y - ref[0]);
}

double manipulator_control(double y, double yd, double ydd, double yddd,
                           double v, const ManipulatorParams& p) {
  if (!std::isfinite(y) || !std::isfinite(yd) || !std::isfinite(ydd) ||
      !std::isfinite(yddd) || !std::isfinite(v))
    throw std::invalid_argument("non-finite controller input");

  const double mgh = p.mgh();
  const double sy = std::sin(y), cy = std::cos(y);

  // Motor coordinates expressed through the flat output and y'''' = v.
  const double theta_m = (p.link_inertia * ydd + mgh * sy) / p.spring + y;
  const double theta_m_dot = (p.link_inertia * yddd + mgh * yd * cy) / p.spring + yd;
  const double theta_m_ddot =
      (p.link_inertia * v + mgh * (ydd * cy - yd * yd * sy)) / p.spring + ydd;

  return (p.motor_inertia * theta_m_ddot + p.damping * theta_m_dot -
          p.spring * (y - theta_m)) /
         p.torque_gain;
}

std::array<double, 3> rigid_pi_control(const std::array<double, 3>& w,
                                       const std::array<double, 3>& w_integral,
                                       const std::array<double, 3>& inertia,
                                       const PiGains& g) {
  for (double i : inertia)
    if (!(i > 0)) throw std::invalid_argument("non-positive inertia estimate");
  std::array<double, 3> u{};
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    u[i] = -(inertia[j] - inertia[k]) * w[j] * w[k] +
           inertia[i] * (-g.lambda1 * w[i] - g.lambda0 * w_integral[i]);
  }
  return u;
}

}  // namespace algdiff
