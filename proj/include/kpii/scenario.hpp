#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "kpii/cases.hpp"
#include "json.hpp"

namespace kpii {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string name;
  CaseSpec spec;
  std::array<double, 3> k{};
  double p3 = 0.0;
  std::optional<std::array<double, 3>> p;  // generic only
  std::array<double, 3> xi0{};
  double t_min = 3.0;
  // Generic scenarios may name the resonant case they are meant to approach.
  std::optional<CaseId> intent;
};

Scenario parse_scenario(const nlohmann::ordered_json& j);
Scenario load_scenario(const std::string& path);
nlohmann::ordered_json scenario_json(const Scenario& s);
ResonantSolution build_scenario(const Scenario& s);
// Resonant template the generic scenario was meant to approach.
ResonantSolution intent_template(const Scenario& s);

}  // namespace kpii
