#include <stdexcept>

#include "scenarios/scenarios.hpp"

namespace algdiff {

double ScenarioResult::metric(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.name == name) return m.value;
  throw std::out_of_range("no metric named " + name);
}

}  // namespace algdiff
