#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kpii/cases.hpp"
#include "kpii/geometry.hpp"
#include "kpii/scenario.hpp"

namespace kpii::test {

inline std::string scenario_path(const std::string& name) {
  return std::string(KPII_SOURCE_DIR) + "/scenarios/" + name + ".json";
}

inline Scenario figure_scenario(const std::string& name) { return load_scenario(scenario_path(name)); }
inline ResonantSolution figure(const std::string& name) { return build_scenario(figure_scenario(name)); }

struct FigureCase {
  CaseId id;
  std::string scenario;
};

// One shipped parameter set per case template.
inline const std::vector<FigureCase>& figure_cases() {
  static const std::vector<FigureCase> v = {
      {CaseId::C2_1, "fig2-1"}, {CaseId::C2_2, "fig2-4-adjusted"}, {CaseId::C2_3, "fig2-5"},
      {CaseId::C2_4, "fig2-6"}, {CaseId::W2, "fig2-7"},            {CaseId::M2, "fig2-9"},
      {CaseId::C3_1, "fig3-1"}, {CaseId::C3_2, "fig3-3"}};
  return v;
}

// Every shipped figure scenario with admissible parameters.
inline const std::vector<std::string>& figure_scenarios() {
  static const std::vector<std::string> v = {"fig2-1", "fig2-3", "fig2-4-adjusted", "fig2-5", "fig2-6",
                                             "fig2-7", "fig2-9", "fig3-1",          "fig3-3"};
  return v;
}

// Random admissible parameters near a figure set: each k_j scaled by up to
// 15%, p3 shifted by up to 0.2 (relative when large). Inadmissible draws are
// rejected and redrawn.
inline std::optional<ResonantSolution> perturbed_draw(const Scenario& base, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> scale(-0.15, 0.15), shift(-0.2, 0.2);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Scenario s = base;
    for (double& k : s.k) k *= std::exp(scale(rng));
    s.p3 += shift(rng) * std::max(1.0, std::abs(s.p3));
    try {
      return build_scenario(s);
    } catch (const std::invalid_argument&) {
    }
  }
  return std::nullopt;
}

// Central difference of f at x with one Richardson step.
template <class F>
double richardson(F&& f, double x, double h = 1e-3) {
  auto d = [&](double hh) { return (f(x + hh) - f(x - hh)) / (2 * hh); };
  return (4 * d(h / 2) - d(h)) / 3;
}

inline double rel_gap(const Vec2& a, const Vec2& b) {
  const double scale = std::max({1.0, std::abs(a[0]), std::abs(a[1])});
  return std::hypot(a[0] - b[0], a[1] - b[1]) / scale;
}

// Unordered pair comparison.
inline double pair_gap(const std::pair<Vec2, Vec2>& p, const std::pair<Vec2, Vec2>& q) {
  const double direct = std::max(rel_gap(p.first, q.first), rel_gap(p.second, q.second));
  const double swapped = std::max(rel_gap(p.first, q.second), rel_gap(p.second, q.first));
  return std::min(direct, swapped);
}

inline double det3(const Line& a, const Line& b, const Line& c) {
  return a.A * (b.B * c.C - b.C * c.B) - a.B * (b.A * c.C - b.C * c.A) + a.C * (b.A * c.B - b.B * c.A);
}

// Coefficient of |t| in the past-stem length, per case.
inline double past_slope(const ResonantSolution& s) {
  const auto [k1, k2, k3] = s.params.k;
  const double p3 = s.params.p[2];
  switch (s.spec.id) {
    case CaseId::C2_1: return 4 * std::sqrt(k3 * k3 + std::pow(k3 * (k1 - k2) + p3, 2));
    case CaseId::W2:
      return 4 * std::abs((k2 - k3) / k3) * std::sqrt(k1 * k1 * k3 * k3 - 2 * k1 * k3 * p3 + k3 * k3 + p3 * p3);
    case CaseId::M2: return 4 * std::abs((k1 + k3) / k3) * std::sqrt(k3 * k3 + std::pow(k2 * k3 + p3, 2));
    case CaseId::C3_1: return 4 * std::abs(k2) * std::sqrt(k1 * k1 + 1 - 2 * k1 * p3 / k3 + p3 * p3 / (k3 * k3));
    default: return NAN;
  }
}

inline const char* const kClosedForm[] = {"fig2-1", "fig2-5", "fig2-7", "fig2-9", "fig3-1"};
inline const char* const kLengthForm[] = {"fig2-1", "fig2-7", "fig2-9", "fig3-1"};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path scratch_path(const std::string& stem) {
  static std::atomic<int> counter{0};
  return std::filesystem::temp_directory_path() /
         ("kpii-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" + stem);
}

struct CliRun {
  int code = -1;
  std::string out, err;
};

// Runs the CLI through the shell with `args` appended verbatim.
inline CliRun run_cli(const std::string& args, const std::string& env = "") {
  const auto out = scratch_path("stdout"), err = scratch_path("stderr");
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" KPII_CLI "' " + args + " >'" + out.string() + "' 2>'" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  std::filesystem::remove(out);
  std::filesystem::remove(err);
  return r;
}

inline std::string scenario_arg(const std::string& name) { return "--scenario '" + scenario_path(name) + "'"; }

struct Golden {
  std::string file;  // under tests/golden/
  std::string args;
};

// Byte-exact reference outputs for every shipped scenario.
inline std::vector<Golden> golden_cases() {
  std::vector<Golden> v;
  for (const auto& n : figure_scenarios()) {
    const std::string sc = scenario_arg(n);
    v.push_back({n + ".build.json", "build " + sc});
    v.push_back({n + ".stem.csv", "stem " + sc + " --t -20,-1,1,20"});
    v.push_back({n + ".stem.json", "stem " + sc + " --t -5,5 --format json"});
    v.push_back({n + ".sample.csv", "sample " + sc + " --t -1 --grid -10,10,9,-10,10,7"});
    v.push_back({n + ".sample.json", "sample " + sc + " --t 1 --grid -10,10,5,-10,10,4 --format json"});
    v.push_back({n + ".section.csv", "section " + sc + " --t -5 --n 41"});
    v.push_back({n + ".verify.json", "verify " + sc});
  }
  for (const std::string n : {"generic", "generic-perturbed-c2_1"}) {
    v.push_back({n + ".build.json", "build " + scenario_arg(n)});
    v.push_back({n + ".sample.csv", "sample " + scenario_arg(n) + " --t 0 --grid -10,10,9,-10,10,7"});
  }
  v.push_back({"generic.verify.json", "verify " + scenario_arg("generic")});
  return v;
}

inline std::filesystem::path golden_path(const std::string& file) {
  return std::filesystem::path(KPII_SOURCE_DIR) / "tests" / "golden" / file;
}

}  // namespace kpii::test
