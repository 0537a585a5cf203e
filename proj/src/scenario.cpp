#include "kpii/scenario.hpp"

#include <cmath>
#include <fstream>

namespace kpii {

using nlohmann::ordered_json;

namespace {

double number(const ordered_json& j, const std::string& field) {
  if (!j.is_number()) throw ScenarioError("field " + field + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ScenarioError("field " + field + " must be finite");
  return v;
}

std::array<double, 3> triple(const ordered_json& obj, const std::string& field) {
  if (!obj.contains(field)) throw ScenarioError("missing field " + field);
  const ordered_json& a = obj.at(field);
  if (!a.is_array()) throw ScenarioError("field " + field + " must be an array of 3 numbers");
  if (a.size() > 3) throw ScenarioError("field " + field + " has more than 3 entries");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string name = field + "[" + std::to_string(i) + "]";
    if (i >= a.size()) throw ScenarioError("missing field " + name);
    out[i] = number(a[i], name);
  }
  return out;
}

CaseId case_field(const ordered_json& obj, const std::string& field) {
  if (!obj.at(field).is_string()) throw ScenarioError("field " + field + " must be a string");
  const auto id = parse_case(obj.at(field).get<std::string>());
  if (!id) throw ScenarioError("unknown case \"" + obj.at(field).get<std::string>() + "\"");
  return *id;
}

}  // namespace

Scenario parse_scenario(const ordered_json& j) {
  if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");
  Scenario s;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ScenarioError("field name must be a string");
    s.name = j["name"].get<std::string>();
  }
  if (!j.contains("case")) throw ScenarioError("missing field case");
  s.spec.id = case_field(j, "case");
  if (j.contains("branch")) {
    const auto b = j["branch"].is_string() ? j["branch"].get<std::string>() : "";
    if (b == "first")
      s.spec.branch = Branch::First;
    else if (b == "second")
      s.spec.branch = Branch::Second;
    else
      throw ScenarioError("field branch must be \"first\" or \"second\"");
  }
  s.k = triple(j, "k");
  if (s.spec.id == CaseId::Generic) {
    s.p = triple(j, "p");
    s.p3 = (*s.p)[2];
    if (j.contains("intent")) {
      s.intent = case_field(j, "intent");
      if (*s.intent == CaseId::Generic) throw ScenarioError("intent must name a resonant case");
    }
  } else {
    if (!j.contains("p3")) throw ScenarioError("missing field p3");
    s.p3 = number(j["p3"], "p3");
  }
  if (j.contains("xi0")) s.xi0 = triple(j, "xi0");
  if (j.contains("t_min")) {
    s.t_min = number(j["t_min"], "t_min");
    if (s.t_min < 0) throw ScenarioError("field t_min must be nonnegative");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

ordered_json scenario_json(const Scenario& s) {
  ordered_json j;
  if (!s.name.empty()) j["name"] = s.name;
  j["case"] = case_name(s.spec.id);
  if (s.spec.id != CaseId::Generic || s.intent) j["branch"] = branch_name(s.spec.branch);
  j["k"] = s.k;
  if (s.p)
    j["p"] = *s.p;
  else
    j["p3"] = s.p3;
  j["xi0"] = s.xi0;
  j["t_min"] = s.t_min;
  if (s.intent) j["intent"] = case_name(*s.intent);
  return j;
}

ResonantSolution build_scenario(const Scenario& s) {
  if (s.spec.id == CaseId::Generic) return make_generic(s.k, *s.p, s.xi0);
  return build_solution(resolve_constraints(s.k, s.p3, s.xi0, s.spec), s.spec);
}

ResonantSolution intent_template(const Scenario& s) {
  if (!s.intent) throw ScenarioError("scenario has no intent case");
  const CaseSpec spec{*s.intent, s.spec.branch};
  return build_solution(resolve_constraints(s.k, s.p3, s.xi0, spec), spec);
}

}  // namespace kpii
