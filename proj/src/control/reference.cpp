#include "control/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace algdiff {

ReferenceTrajectory ReferenceTrajectory::rest_to_rest(double start_value,
                                                      double end_value,
                                                      double start_time,
                                                      double end_time) {
  if (!(end_time > start_time)) throw std::invalid_argument("end_time must exceed start_time");
  ReferenceTrajectory r(Kind::rest_to_rest);
  r.p0_ = start_value;
  r.p1_ = end_value;
  r.t0_ = start_time;
  r.t1_ = end_time;
  return r;
}

ReferenceTrajectory ReferenceTrajectory::sinusoid(double amplitude, double omega) {
  ReferenceTrajectory r(Kind::sinusoid);
  r.amp_ = amplitude;
  r.omega_ = omega;
  return r;
}

RefPoint ReferenceTrajectory::eval(double t) const {
  if (kind_ == Kind::sinusoid) {
    const double w = omega_;
    const double s = std::sin(w * t), c = std::cos(w * t);
    return {amp_ * s, amp_ * w * c, -amp_ * w * w * s, -amp_ * w * w * w * c,
            amp_ * w * w * w * w * s};
  }

  if (t <= t0_) return {p0_, 0, 0, 0, 0};
  if (t >= t1_) return {p1_, 0, 0, 0, 0};

  // phi(s) = 126 s^5 - 420 s^6 + 540 s^7 - 315 s^8 + 70 s^9, the unique
  // 9th-degree interpolant with phi(0)=0, phi(1)=1 and four vanishing
  // derivatives at each end.
  static constexpr double kc[5] = {126.0, -420.0, 540.0, -315.0, 70.0};
  const double dur = t1_ - t0_;
  const double s = (t - t0_) / dur;

  RefPoint out{};
  for (int d = 0; d <= 4; ++d) {
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) {
      const int p = 5 + k;  // power of s in the base polynomial
      if (p - d < 0) continue;
      double fall = 1.0;
      for (int q = 0; q < d; ++q) fall *= (p - q);
      acc += kc[k] * fall * std::pow(s, p - d);
    }
    double scale = p1_ - p0_;
    for (int q = 0; q < d; ++q) scale /= dur;
    out[d] = acc * scale;
  }
  out[0] += p0_;
  return out;
}

}  // namespace algdiff
