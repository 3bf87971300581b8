// Acceptance suite: one pass/fail line per release gate. Exits nonzero if
// any gate fails. Gates are deliberately re-derived here instead of reusing
// the unit-test helpers so a regression cannot hide in shared code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "algdiff/algdiff.h"
#include "control/gpi.hpp"
#include "core/kernel.hpp"
#include "scenarios/scenarios.hpp"
#include "sim/noise.hpp"
#include "sim/ode.hpp"

using namespace algdiff;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail, double seconds) {
  std::printf("criterion %2d: %s  %s  (%.2f s)\n", id, pass ? "PASS" : "FAIL",
              detail.c_str(), seconds);
  if (!pass) ++g_failures;
}

template <typename Fn>
void gate(int id, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, pass, detail, sec);
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

// Global RK4 error at t = 1 for xdot = -x, x(0) = 1.
double decay_error(double h) {
  auto f = [](double, const StateVec& x) { return StateVec{-x[0]}; };
  StateVec x{1.0};
  const int steps = static_cast<int>(std::lround(1.0 / h));
  for (int i = 0; i < steps; ++i) x = rk4_step(f, i * h, x, h);
  return std::abs(x[0] - std::exp(-1.0));
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

// 1. Exact on random polynomials up to the estimator order.
bool poly_exactness(std::string& detail) {
  const double h = 1e-3, T = 0.5;
  SplitMix64 rng(2024);
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const EstimatorKernel kernel({n, 0, T, h});
    const int m = kernel.sample_count();
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> coef(n + 1);
      for (double& c : coef) c = 2.0 * rng.next_uniform() - 1.0;
      std::vector<double> samples(m);
      for (int i = 0; i < m; ++i) {
        const double t = i * h;
        double acc = 0.0;
        for (int j = n; j >= 0; --j) acc = acc * t + coef[j];
        samples[i] = acc;
      }
      const auto est = kernel.estimate(samples);
      double fact = 1.0;
      for (int v = 0; v <= n; ++v) {
        if (v > 0) fact *= v;
        worst = std::max(worst, std::abs(est.values[v] - fact * coef[v]));
      }
    }
  }
  detail = fmt("max derivative error %.2e < 1e-6", worst);
  return worst < 1e-6;
}

// 2. First-derivative error strictly decreases as the window shrinks.
bool window_convergence(std::string& detail) {
  const double h = 1e-3;
  const std::vector<double> windows{0.8, 0.4, 0.2, 0.1};
  bool ok = true;
  double last_ratio = 0.0;
  for (int sig = 0; sig < 2; ++sig) {
    double prev = 0.0;
    for (std::size_t wi = 0; wi < windows.size(); ++wi) {
      const EstimatorKernel kernel({3, 5, windows[wi], h});
      const int m = kernel.sample_count();
      std::vector<double> samples(m);
      for (int i = 0; i < m; ++i)
        samples[i] = sig ? std::exp(i * h) : std::sin(i * h);
      const double err = std::abs(kernel.estimate(samples).values[1] - 1.0);
      if (wi > 0) {
        if (!(err < prev)) ok = false;
        last_ratio = err / prev;
      }
      prev = err;
    }
  }
  detail = fmt("errors strictly decrease, final step ratio %.2e", last_ratio);
  return ok;
}

// 3. Beats a central difference on noisy sin t and stays under 0.05 RMS.
bool noise_attenuation(std::string& detail) {
  const double h = 1e-3, T = 0.3, sigma = 0.01;
  const EstimatorKernel kernel({2, 0, T, h});
  const int m = kernel.sample_count();
  double sq_alg = 0.0, sq_fd = 0.0;
  for (int seed = 1; seed <= 100; ++seed) {
    GaussianNoise noise({sigma, static_cast<std::uint64_t>(seed)});
    const double t0 = 0.5 + 0.01 * seed;
    // noisy samples at t0 - h .. t0 + T; the estimator sees t0 .. t0 + T
    std::vector<double> raw(m + 1);
    for (int i = 0; i <= m; ++i) raw[i] = std::sin(t0 + (i - 1) * h) + noise.next();
    const std::vector<double> windowed(raw.begin() + 1, raw.end());
    const double d1 = kernel.estimate(windowed).values[1];
    const double fd = (raw[2] - raw[0]) / (2.0 * h);
    const double truth = std::cos(t0);
    sq_alg += (d1 - truth) * (d1 - truth);
    sq_fd += (fd - truth) * (fd - truth);
  }
  const double rms_alg = std::sqrt(sq_alg / 100.0);
  const double rms_fd = std::sqrt(sq_fd / 100.0);
  detail = fmt("rms %.2e vs central difference %.2e", rms_alg, rms_fd);
  return rms_alg < rms_fd && rms_alg < 0.05;
}

// 4. Integrator converges at fourth order.
bool rk4_order(std::string& detail) {
  const double ratio = decay_error(0.1) / decay_error(0.05);
  detail = fmt("halving-step error ratio %.2f in [14, 18]", ratio);
  return ratio > 14.0 && ratio < 18.0;
}

// 5. Discrete controller realization matches its analytic step response.
bool gpi_realization(std::string& detail) {
  GpiFilter g(256.0, 207.36, 73.9904, 12.96);
  const double h = 1e-3;
  double worst = 0.0;
  for (int k = 1; k <= 10000; ++k)
    worst = std::max(worst, std::abs(g.apply(1.0, h) - g.step_response(k * h)));
  detail = fmt("max step-response deviation %.2e < 1e-3", worst);
  return worst < 1e-3;
}

// 6. Flexible-joint manipulator: exact truth-fed tracking, noisy tracking
// under 0.02 RMS, and the offline re-estimate at least as good as online.
bool manipulator_gate(std::string& detail) {
  ManipulatorConfig clean;
  clean.common.sigma = 0.0;
  clean.truth_feedback = true;
  const auto exact = run_manipulator(clean);
  const auto& t = exact.trace.time();
  const auto& y = exact.trace.channel("y");
  const auto& yref = exact.trace.channel("y_ref");
  double worst = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t[k] >= 3.5) worst = std::max(worst, std::abs(y[k] - yref[k]));

  const auto noisy = run_manipulator(ManipulatorConfig{});
  const double rms = noisy.metric("tracking_rms");
  const bool offline_ok =
      noisy.metric("theta_m_offline_rms") <= noisy.metric("theta_m_online_rms");
  detail = fmt("truth-fed error %.2e, noisy tracking rms %.4f", worst, rms) +
           (offline_ok ? ", offline <= online" : ", offline WORSE than online");
  return worst < 1e-4 && rms < 0.02 && offline_ok;
}

// 7. Rigid body: inertias within 2% by t = 5 and the identified loop
// stabilizes better than deliberately false parameters.
bool rigidbody_gate(std::string& detail) {
  const auto res = run_rigidbody(RigidBodyConfig{});
  double worst_rel = 0.0;
  for (int i = 1; i <= 3; ++i)
    worst_rel = std::max(
        worst_rel, res.metric("inertia" + std::to_string(i) + "_rel_err_t5"));
  const double ident = res.metric("stabilization_identified");
  const double wrong = res.metric("stabilization_false");
  detail = fmt("worst inertia error %.3f%%, ", 100.0 * worst_rel) +
           fmt("stabilization %.3f < %.3f", ident, wrong);
  return worst_rel < 0.02 && ident < wrong;
}

// 8. Two tank: inflow and fault estimates on target, accommodation
// recovers at least 4x of the unaccommodated tracking error.
bool twotank_gate(std::string& detail) {
  TwoTankConfig cfg;
  const auto res = run_twotank(cfg);
  const double varpi_err = std::abs(res.metric("varpi_hat_at_fault") - cfg.varpi);
  const double w_err = std::abs(res.metric("w_hat_acc_plus_1s") - cfg.fault_w);
  const double ratio = res.metric("rms_postfault_accommodated") /
                       res.metric("rms_postfault_unaccommodated");
  detail = fmt("inflow err %.4f, fault err %.4f", varpi_err, w_err) +
           fmt(", rms ratio %.3f < 0.25", ratio);
  return varpi_err < 0.01 && w_err < 0.05 && ratio < 0.25;
}

// 9. Perturbation compensation attenuates to under 10% on both plants.
bool pert_gate(PertPlantKind kind, std::string& detail) {
  PertConfig cfg;
  cfg.kind = kind;
  const auto res = run_pert(cfg);
  const double ratio =
      res.metric("rms_compensated") / res.metric("rms_uncompensated");
  const bool finite = res.metric("diverged_compensated") == 0.0;
  detail = fmt("rms ratio %.3f < 0.10", ratio) + (finite ? "" : ", DIVERGED");
  return ratio < 0.10 && finite;
}

// 10. Identical configuration and seed give a byte-identical trace.
bool determinism_gate(std::string& detail) {
  const fs::path base = fs::temp_directory_path() / "algdiff_acceptance";
  fs::remove_all(base);
  const fs::path a = base / "a", b = base / "b";
  fs::create_directories(a);
  fs::create_directories(b);
  const char* cfg = R"({"seed": 17})";
  for (const auto& dir : {a, b}) {
    const ad_status rc =
        ad_simulate("twotank", cfg, -1, -1, -1, dir.string().c_str(), nullptr);
    if (rc != AD_OK) {
      detail = std::string("simulation failed: ") + ad_last_error();
      return false;
    }
  }
  const std::string ta = slurp(a / "trace.csv"), tb = slurp(b / "trace.csv");
  const bool same = !ta.empty() && ta == tb;
  detail = fmt("trace.csv bytes %.0f, reruns identical: ", double(ta.size())) +
           (same ? "yes" : "NO");
  return same;
}

}  // namespace

int main() {
  gate(1, [](std::string& d) { return poly_exactness(d); });
  gate(2, [](std::string& d) { return window_convergence(d); });
  gate(3, [](std::string& d) { return noise_attenuation(d); });
  gate(4, [](std::string& d) { return rk4_order(d); });
  gate(5, [](std::string& d) { return gpi_realization(d); });
  gate(6, [](std::string& d) { return manipulator_gate(d); });
  gate(7, [](std::string& d) { return rigidbody_gate(d); });
  gate(8, [](std::string& d) { return twotank_gate(d); });
  gate(9, [](std::string& d) { return pert_gate(PertPlantKind::linear, d); });
  gate(9, [](std::string& d) { return pert_gate(PertPlantKind::nonlinear, d); });
  gate(10, [](std::string& d) { return determinism_gate(d); });

  if (g_failures) {
    std::printf("%d criterion check(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
