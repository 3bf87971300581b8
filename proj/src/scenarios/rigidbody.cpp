#include <cmath>
#include <memory>

#include "core/streaming.hpp"
#include "scenarios/scenarios.hpp"
#include "sim/noise.hpp"
#include "sim/ode.hpp"

namespace algdiff {
namespace {

std::array<double, 3> euler_rates(const std::array<double, 3>& w,
                                  const std::array<double, 3>& u,
                                  const std::array<double, 3>& inertia) {
  std::array<double, 3> d{};
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    d[i] = ((inertia[j] - inertia[k]) * w[j] * w[k] + u[i]) / inertia[i];
  }
  return d;
}

// Euclidean norm of the linear map from window samples to the d1 output,
// used to translate measurement-noise variance into wdot-estimate variance.
double d1_noise_gain(const EstimatorKernel& ker) {
  std::vector<double> basis(ker.sample_count(), 0.0);
  double ss = 0.0;
  for (int i = 0; i < ker.sample_count(); ++i) {
    basis[i] = 1.0;
    const auto e = ker.estimate(basis);
    basis[i] = 0.0;
    ss += e.values[1] * e.values[1];
  }
  return std::sqrt(ss);
}

struct VariantRun {
  std::vector<double> w[3];        // true angular velocities
  std::vector<double> w_e[3];      // estimates fed to the controller
  std::vector<double> u[3];
  std::vector<double> inertia_e[3];
  double stabilization = 0;        // integral of |w1|+|w2|+|w3|
};

VariantRun simulate(const RigidBodyConfig& cfg, RigidBodyConfig::Variant variant) {
  const double h = cfg.common.step;
  const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.common.horizon / h));
  const PiGains gains = PiGains::from_damping(cfg.xi, cfg.varpi);
  const bool identify = variant == RigidBodyConfig::Variant::identified;

  auto kernel = std::make_shared<const EstimatorKernel>(
      EstimatorConfig{cfg.estimator_order, 0, cfg.estimator_window, h});
  std::vector<StreamingDifferentiator> diffs;
  std::vector<GaussianNoise> noises;
  for (int i = 0; i < 3; ++i) {
    diffs.emplace_back(kernel, StreamMode::time_reversed);
    noises.emplace_back(NoiseSpec{cfg.common.sigma,
                                  cfg.common.seed + static_cast<std::uint64_t>(i)});
  }

  VariantRun run;
  for (int i = 0; i < 3; ++i) {
    run.w[i].resize(steps + 1);
    run.w_e[i].resize(steps + 1);
    run.u[i].resize(steps + 1);
    run.inertia_e[i].resize(steps + 1);
  }

  std::array<double, 3> w = cfg.w0;
  std::array<double, 3> integral{0, 0, 0};
  std::array<double, 3> prev_we{0, 0, 0};
  std::array<double, 3> u_prev{0, 0, 0};
  InertiaRegression regression;
  const double d1_gain = d1_noise_gain(*kernel);
  // Measurement-noise variance estimated online from first differences of
  // the measurements: Var(m_k - m_{k-1}) ~ 2 sigma^2 since the signal moves
  // far less than the noise over one step.
  double diff_sq_sum = 0.0;
  std::size_t diff_count = 0;
  std::array<double, 3> prev_meas{};
  // Warm-up policy: false values until the first well-conditioned solve.
  std::array<double, 3> inertia_used =
      variant == RigidBodyConfig::Variant::true_inertia ? cfg.inertia_true
                                                        : cfg.inertia_false;

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * h;

    std::array<double, 3> w_e{}, wdot_e{}, meas{};
    bool warm = true;
    for (int i = 0; i < 3; ++i) {
      meas[i] = w[i] + noises[i].next();
      if (auto est = diffs[i].push_sample(t, meas[i])) {
        w_e[i] = est->values[0];
        wdot_e[i] = est->values[1];
      } else {
        warm = false;
      }
    }
    if (k > 0) {
      for (int i = 0; i < 3; ++i) {
        const double d = meas[i] - prev_meas[i];
        diff_sq_sum += d * d;
      }
      diff_count += 3;
    }
    prev_meas = meas;
    if (!warm) {
      w_e = w;
      wdot_e = euler_rates(w, u_prev, cfg.inertia_true);
    }

    if (k > 0)
      for (int i = 0; i < 3; ++i) integral[i] += 0.5 * h * (prev_we[i] + w_e[i]);
    prev_we = w_e;

    // The wdot estimate at t reflects inputs applied up to t, so blocks are
    // paired with the previous control sample.
    const bool ident_window = t >= cfg.ident_start() && t <= cfg.ident_stop;
    if (identify && warm && ident_window) regression.add_block(w_e, wdot_e, u_prev);

    if (identify && ident_window &&
        regression.blocks() >= static_cast<std::size_t>(cfg.ident_min_blocks)) {
      const double sigma_sq = diff_count ? diff_sq_sum / (2.0 * diff_count) : 0.0;
      if (auto sol = regression.solve(cfg.condition_limit, d1_gain * d1_gain * sigma_sq)) {
        if ((*sol)[0] > 0 && (*sol)[1] > 0 && (*sol)[2] > 0) inertia_used = *sol;
      }
    }

    const std::array<double, 3> u = rigid_pi_control(w_e, integral, inertia_used, gains);

    for (int i = 0; i < 3; ++i) {
      run.w[i][k] = w[i];
      run.w_e[i][k] = w_e[i];
      run.u[i][k] = u[i];
      run.inertia_e[i][k] = inertia_used[i];
    }
    run.stabilization +=
        (k == 0 || k == steps ? 0.5 : 1.0) * h *
        (std::abs(w[0]) + std::abs(w[1]) + std::abs(w[2]));

    if (k == steps) break;
    auto f = [&](double, const StateVec& s) {
      const auto d = euler_rates({s[0], s[1], s[2]}, u, cfg.inertia_true);
      return StateVec{d[0], d[1], d[2]};
    };
    const StateVec next = rk4_step(f, t, StateVec{w[0], w[1], w[2]}, h);
    w = {next[0], next[1], next[2]};
    u_prev = u;
  }
  return run;
}

}  // namespace

ScenarioResult run_rigidbody(const RigidBodyConfig& cfg) {
  const double h = cfg.common.step;
  const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.common.horizon / h));

  const VariantRun identified = simulate(cfg, RigidBodyConfig::Variant::identified);
  const VariantRun with_true = simulate(cfg, RigidBodyConfig::Variant::true_inertia);
  const VariantRun with_false = simulate(cfg, RigidBodyConfig::Variant::false_inertia);

  const VariantRun& primary = cfg.primary == RigidBodyConfig::Variant::identified
                                  ? identified
                                  : cfg.primary == RigidBodyConfig::Variant::true_inertia
                                        ? with_true
                                        : with_false;

  ScenarioResult res;
  std::vector<double> tgrid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) tgrid[k] = static_cast<double>(k) * h;
  res.trace.set_time(tgrid);
  for (int i = 0; i < 3; ++i) {
    const std::string n = std::to_string(i + 1);
    res.trace.add_channel("w" + n) = primary.w[i];
    res.trace.add_channel("w" + n + "_e") = primary.w_e[i];
    res.trace.add_channel("u" + n) = primary.u[i];
    res.trace.add_channel("I" + n + "_e") = primary.inertia_e[i];
  }
  // |w1|+|w2|+|w3| per variant, so the stabilization metrics can be
  // recomputed from the trace alone.
  auto wabs = [&](const VariantRun& r, const std::string& name) {
    auto& ch = res.trace.add_channel(name);
    for (std::size_t k = 0; k <= steps; ++k)
      ch[k] = std::abs(r.w[0][k]) + std::abs(r.w[1][k]) + std::abs(r.w[2][k]);
  };
  wabs(identified, "wabs_identified");
  wabs(with_true, "wabs_true");
  wabs(with_false, "wabs_false");

  const std::size_t k5 =
      std::min(steps, static_cast<std::size_t>(std::llround(5.0 / h)));
  for (int i = 0; i < 3; ++i) {
    const double rel =
        std::abs(identified.inertia_e[i][k5] - cfg.inertia_true[i]) / cfg.inertia_true[i];
    res.metrics.push_back({"inertia" + std::to_string(i + 1) + "_rel_err_t5", rel});
    res.metrics.push_back({"inertia" + std::to_string(i + 1) + "_final",
                           identified.inertia_e[i][steps]});
  }
  res.metrics.push_back({"stabilization_identified", identified.stabilization});
  res.metrics.push_back({"stabilization_true", with_true.stabilization});
  res.metrics.push_back({"stabilization_false", with_false.stabilization});
  return res;
}

}  // namespace algdiff
