#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "control/gpi.hpp"
#include "control/laws.hpp"
#include "control/reference.hpp"

using namespace algdiff;

TEST_CASE("gpi discrete realization matches the analytic step response") {
  GpiFilter g(256.0, 207.36, 73.9904, 12.96);
  const double h = 1e-3;
  double worst = 0.0;
  for (int k = 1; k <= 10000; ++k) {
    const double out = g.apply(1.0, h);
    worst = std::max(worst, std::abs(out - g.step_response(k * h)));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("gpi pole at the origin integrates a constant error") {
  // For large t the step response grows like (l0/l3) t.
  GpiFilter g(8.0, 10.0, 3.0, 2.0);
  const double slope = (g.step_response(100.0) - g.step_response(99.0)) / 1.0;
  CHECK(slope == doctest::Approx(8.0 / 2.0).epsilon(1e-6));
}

TEST_CASE("gpi state snapshot and restore replay identically") {
  GpiFilter a(256.0, 207.36, 73.9904, 12.96);
  for (int k = 0; k < 500; ++k) (void)a.apply(std::sin(0.01 * k), 1e-3);
  const auto saved = a.state();
  double tail_a = 0.0, tail_b = 0.0;
  GpiFilter b(256.0, 207.36, 73.9904, 12.96);
  b.set_state(saved);
  for (int k = 0; k < 200; ++k) {
    tail_a = a.apply(0.3, 1e-3);
    tail_b = b.apply(0.3, 1e-3);
  }
  CHECK(tail_a == tail_b);
  a.reset();
  CHECK(a.apply(0.0, 1e-3) == 0.0);
}

TEST_CASE("rest-to-rest reference meets its boundary conditions") {
  const auto traj = ReferenceTrajectory::rest_to_rest(0.5, 1.25, 1.0, 3.0);
  const RefPoint before = traj.eval(0.2);
  const RefPoint at_start = traj.eval(1.0);
  const RefPoint at_end = traj.eval(3.0);
  const RefPoint after = traj.eval(5.0);
  CHECK(before[0] == 0.5);
  CHECK(at_start[0] == doctest::Approx(0.5));
  CHECK(at_end[0] == doctest::Approx(1.25));
  CHECK(after[0] == 1.25);
  for (int v = 1; v <= 4; ++v) {
    CHECK(at_start[v] == doctest::Approx(0.0).scale(1.0));
    CHECK(at_end[v] == doctest::Approx(0.0).scale(1.0));
    CHECK(before[v] == 0.0);
    CHECK(after[v] == 0.0);
  }
  // derivatives are consistent with finite differences of the value
  const double t = 1.7, dh = 1e-5;
  const double fd1 = (traj.eval(t + dh)[0] - traj.eval(t - dh)[0]) / (2.0 * dh);
  CHECK(traj.eval(t)[1] == doctest::Approx(fd1).epsilon(1e-6));
}

TEST_CASE("sinusoid reference differentiates correctly") {
  const auto traj = ReferenceTrajectory::sinusoid(2.0, 3.0);
  const double t = 0.73;
  const RefPoint r = traj.eval(t);
  CHECK(r[0] == doctest::Approx(2.0 * std::sin(3.0 * t)));
  CHECK(r[1] == doctest::Approx(6.0 * std::cos(3.0 * t)));
  CHECK(r[2] == doctest::Approx(-18.0 * std::sin(3.0 * t)));
  CHECK(r[3] == doctest::Approx(-54.0 * std::cos(3.0 * t)));
  CHECK(r[4] == doctest::Approx(162.0 * std::sin(3.0 * t)));
}

TEST_CASE("manipulator tracking law is a pole-placement error feedback") {
  const ManipulatorGains g{};
  const RefPoint ref{0.1, 0.2, 0.3, 0.4, 0.5};
  // zero error: aux input equals the reference fourth derivative
  CHECK(manipulator_aux_input(0.1, 0.2, 0.3, 0.4, ref, g) == doctest::Approx(0.5));
  // unit position error adds -g1
  CHECK(manipulator_aux_input(1.1, 0.2, 0.3, 0.4, ref, g) ==
        doctest::Approx(0.5 - g.g1));
}

TEST_CASE("manipulator flatness inversion satisfies the plant equations") {
  // Independent oracle: reconstruct motor angle and its derivatives from
  // the flat output via the link equation
  //   Jl ydd + mgh sin y + kappa (y - theta_m) = 0,
  // then demand the motor equation
  //   Jm theta_m'' + B theta_m' + kappa (theta_m - y) = K u
  // at an arbitrary operating point with y'''' = v.
  const ManipulatorParams p{};
  const double y = 0.31, yd = -0.12, ydd = 0.45, yddd = -0.23, v = 1.9;
  const double u = manipulator_control(y, yd, ydd, yddd, v, p);

  const double theta = (p.link_inertia * ydd + p.mgh() * std::sin(y)) / p.spring + y;
  const double theta_d =
      (p.link_inertia * yddd + p.mgh() * std::cos(y) * yd) / p.spring + yd;
  const double theta_dd =
      (p.link_inertia * v +
       p.mgh() * (std::cos(y) * ydd - std::sin(y) * yd * yd)) / p.spring + ydd;
  const double lhs = p.motor_inertia * theta_dd + p.damping * theta_d +
                     p.spring * (theta - y);
  CHECK(lhs == doctest::Approx(p.torque_gain * u).epsilon(1e-12));

  // link equation holds by construction of theta
  CHECK(p.link_inertia * ydd + p.mgh() * std::sin(y) + p.spring * (y - theta) ==
        doctest::Approx(0.0).scale(1.0));

  CHECK_THROWS_AS((void)manipulator_control(std::nan(""), 0, 0, 0, 0, p),
                  std::invalid_argument);
}

TEST_CASE("rigid-body law cancels cross terms and closes a pi loop per axis") {
  const std::array<double, 3> inertia{0.4, 0.3, 0.2};
  const std::array<double, 3> w{0.5, -0.3, 0.4};
  const std::array<double, 3> wi{0.1, 0.05, -0.2};
  const PiGains g = PiGains::from_damping(0.707, 0.5);
  CHECK(g.lambda1 == doctest::Approx(2.0 * 0.707 * 0.5));
  CHECK(g.lambda0 == doctest::Approx(0.25));

  const auto u = rigid_pi_control(w, wi, inertia, g);
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    // substitute into the Euler equation: the closed-loop rate must be the
    // pure PI law, independent of the cross terms
    const double wdot = ((inertia[j] - inertia[k]) * w[j] * w[k] + u[i]) / inertia[i];
    CHECK(wdot == doctest::Approx(-g.lambda1 * w[i] - g.lambda0 * wi[i]).epsilon(1e-12));
  }

  CHECK_THROWS_AS((void)rigid_pi_control(w, wi, {0.4, 0.0, 0.2}, g),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)rigid_pi_control(w, wi, {0.4, -0.1, 0.2}, g),
                  std::invalid_argument);
}
