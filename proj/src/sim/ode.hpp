#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace algdiff {

using StateVec = std::vector<double>;

/// Explicit case-study dynamics: dx/dt = f(t, x, u, w, pi) with output
/// y = g(x). u is the control input, w the fault vector, pi the
/// perturbation vector (any of which may be empty).
struct PlantModel {
  int state_dim = 0;
  int input_dim = 0;
  std::function<StateVec(double t, const StateVec& x, const StateVec& u,
                         const StateVec& w, const StateVec& pi)>
      vector_field;
  std::function<double(const StateVec& x)> output;
  /// Returns false when the state leaves the valid region.
  std::function<bool(const StateVec& x)> valid = [](const StateVec&) { return true; };
};

/// Raised when a simulation leaves its valid region or diverges.
class SimulationAbort : public std::runtime_error {
 public:
  SimulationAbort(const std::string& scenario, double t, const std::string& what)
      : std::runtime_error(scenario + " aborted at t=" + std::to_string(t) + ": " + what) {}
};

/// One classical RK4 step with inputs held constant (zero-order hold).
template <typename Field>
StateVec rk4_step(const Field& f, double t, const StateVec& x, double h) {
  const std::size_t n = x.size();
  StateVec k1 = f(t, x);
  StateVec tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
  StateVec k2 = f(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
  StateVec k3 = f(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
  StateVec k4 = f(t + h, tmp);
  StateVec out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

inline StateVec rk4_step(const PlantModel& model, double t, const StateVec& x,
                         const StateVec& u, const StateVec& w, const StateVec& pi,
                         double h) {
  auto f = [&](double tt, const StateVec& xx) {
    return model.vector_field(tt, xx, u, w, pi);
  };
  return rk4_step(f, t, x, h);
}

}  // namespace algdiff
