#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>

#include "json.hpp"
#include "support.hpp"

using namespace kpii;
using test::CliRun;
using test::run_cli;
using test::scenario_arg;
using nlohmann::json;

namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string write_scratch(const std::string& text) {
  const auto p = test::scratch_path("scenario.json");
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// Largest u on a section restricted to the middle of the stem.
double stem_section_max(const std::string& scenario, double t, const std::string& line) {
  const auto stem = json::parse(run_cli("stem " + scenario_arg(scenario) + " --t " + std::to_string(t) + " --format json").out);
  const double quarter = stem["reports"][0]["length"].get<double>() / 4;
  const CliRun r = run_cli("section " + scenario_arg(scenario) + " --t " + std::to_string(t) + " --line " + line +
                           " --range " + std::to_string(-quarter) + "," + std::to_string(quarter) + " --n 201");
  REQUIRE(r.code == 0);
  double m = -1;
  const auto rows = csv_rows(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) m = std::max(m, std::stod(rows[i][3]));
  return m;
}

}  // namespace

TEST_CASE("golden outputs") {
  const bool update = std::getenv("KPII_UPDATE_GOLDENS") != nullptr;
  if (update) std::filesystem::create_directories(test::golden_path(""));
  for (const auto& g : test::golden_cases()) {
    CAPTURE(g.args);
    const CliRun r = run_cli(g.args);
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    if (update) std::ofstream(test::golden_path(g.file), std::ios::binary) << r.out;
    const auto want = test::golden_path(g.file);
    REQUIRE(std::filesystem::exists(want));
    CHECK(r.out == test::read_file(want));
  }
}

TEST_CASE("repeated runs are byte-identical") {
  const std::string sc = scenario_arg("fig2-9");
  for (const std::string cmd : {"sample " + sc + " --t 0.5 --grid -30,30,61,-30,30,47",
                                "stem " + sc + " --t -10,0,10 --format json", "verify " + sc + " --suite ridge"}) {
    CAPTURE(cmd);
    const CliRun a = run_cli(cmd), b = run_cli(cmd);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    // Thread count does not change the bytes.
    CHECK(run_cli(cmd, "KPII_STEM_THREADS=1").out == a.out);
    // --out writes exactly what stdout shows.
    const auto path = test::scratch_path("out");
    CHECK(run_cli(cmd + " --out '" + path.string() + "'").code == 0);
    CHECK(test::read_file(path) == a.out);
    std::filesystem::remove(path);
  }
}

TEST_CASE("build round-trip") {
  for (const auto& name : test::figure_scenarios()) {
    CAPTURE(name);
    const CliRun r = run_cli("build " + scenario_arg(name));
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    const ResonantSolution sol = test::figure(name);
    for (int i = 0; i < 3; ++i) {
      CHECK(same_bits(j["resolved"]["k"][i].get<double>(), sol.params.k[i]));
      CHECK(same_bits(j["resolved"]["p"][i].get<double>(), sol.params.p[i]));
      CHECK(same_bits(j["resolved"]["xi0"][i].get<double>(), sol.params.xi0[i]));
    }
    CHECK(j["tau"].size() == sol.tau.size());
    // The echoed scenario rebuilds to the same summary.
    const std::string echo = write_scratch(j["scenario"].dump());
    const CliRun again = run_cli("build --scenario '" + echo + "'");
    std::filesystem::remove(echo);
    CHECK(again.code == 0);
    CHECK(again.out == r.out);
  }
}

TEST_CASE("build summaries") {
  const json c21 = json::parse(run_cli("build " + scenario_arg("fig2-1")).out);
  // a12 = (k1+k3)(k2+k3)/(k3(k1+k2+k3)) at k = (-1, -2, -4/3) is 35/26.
  CHECK(c21["a12"].get<double>() == doctest::Approx(35.0 / 26.0).epsilon(1e-15));
  CHECK(c21["resonance"]["13"] == "STRONG");
  CHECK(c21["catalog"]["axis"] == "y");
  const json c31 = json::parse(run_cli("build " + scenario_arg("fig3-1")).out);
  for (const char* pair : {"12", "13", "23"}) CHECK(c31["resonance"][pair] == "WEAK");
  CHECK(c31["velocity_table"].size() >= 3);
  CHECK(json::parse(run_cli("build " + scenario_arg("generic")).out)["catalog"].is_null());
}

TEST_CASE("csv header") {
  const CliRun r = run_cli("sample " + scenario_arg("fig3-1") + " --t -2 --grid 0,1,2,0,1,2");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# kpii-stem v" KPII_VERSION " case=c3_1 t=-2\nx,y,u\n", 0) == 0);
  CHECK(csv_rows(r.out).size() == 5);
  CHECK(r.out.find('\r') == std::string::npos);
  const CliRun s = run_cli("sample " + scenario_arg("fig2-1") + " --t 0.1 --grid 0,1,2,0,1,2");
  CHECK(s.out.rfind("# kpii-stem v" KPII_VERSION " case=c2_1 t=0.1\n", 0) == 0);
}

TEST_CASE("sample json mirrors the grid") {
  const json j = json::parse(run_cli("sample " + scenario_arg("fig2-5") + " --t 2 --grid -4,4,7,-3,3,5 --format json").out);
  CHECK(j["values"].size() == 35);
  CHECK(j["x_range"] == json::array({-4, 4, 7}));
  CHECK(j["t"] == 2);
  CHECK(j["case"] == "c2_3");
  CHECK(j["version"] == KPII_VERSION);
}

TEST_CASE("stem command examples") {
  const auto c31 = csv_rows(run_cli("stem " + scenario_arg("fig3-1") + " --t 0").out);
  REQUIRE(c31.size() == 2);
  CHECK(c31[1][2] == "0");
  CHECK(c31[1][3] == "0");
  CHECK(c31[1][4] == "0");
  CHECK(c31[1][5] == "0");
  CHECK(c31[1][6] == "0");

  const json c21 = json::parse(run_cli("stem " + scenario_arg("fig2-1") + " --t -20 --format json").out);
  CHECK(std::abs(c21["reports"][0]["midpoint_amplitude"].get<double>() - 169.0 / 18.0) < 1e-3);

  const json m2 = json::parse(run_cli("stem " + scenario_arg("fig2-9") + " --t -20,20 --format json").out);
  for (const auto& rep : m2["reports"]) CHECK(std::abs(rep["midpoint_amplitude"].get<double>() - 0.125) < 1e-3);
}

TEST_CASE("section command examples") {
  CHECK(std::abs(stem_section_max("fig2-1", 1, "arm:3") - 8.0 / 9.0) < 1e-2);
  CHECK(std::abs(stem_section_max("fig2-7", -2, "arm:1-3") - 4.5) < 1e-2);

  const CliRun far = run_cli("section " + scenario_arg("fig2-1") + " --t 0 --line abc:0,1,-400 --range -10,10 --n 21");
  REQUIRE(far.code == 0);
  const auto rows = csv_rows(far.out);
  REQUIRE(rows.size() == 22);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][3]) < 1e-12);

  // The overlay column matches u across a long stem.
  const auto over = csv_rows(run_cli("section " + scenario_arg("fig2-7") + " --t 20 --line perp-mid --range -3,3 --n 7").out);
  for (std::size_t i = 1; i < over.size(); ++i) CHECK(std::abs(std::stod(over[i][3]) - std::stod(over[i][4])) < 1e-3);
}

TEST_CASE("verify certificates") {
  const json c31 = json::parse(run_cli("verify " + scenario_arg("fig3-1") + " --suite residual").out);
  CHECK(c31["pass"] == true);
  CHECK(c31["checks"][0]["value"].get<double>() < 1e-8);

  const CliRun w2 = run_cli("verify " + scenario_arg("fig2-7") + " --suite asymptotics");
  CHECK(w2.code == 0);
  for (const auto& c : json::parse(w2.out)["checks"]) CHECK(c["pass"] == true);

  const std::string bad = scenario_arg("generic-perturbed-c2_1");
  CHECK(run_cli("verify " + bad + " --suite residual").code == 0);
  const CliRun lim = run_cli("verify " + bad + " --suite limits");
  CHECK(lim.code == 1);
  CHECK(json::parse(lim.out)["pass"] == false);
  CHECK(run_cli("verify " + bad).code == 1);

  // A tolerance override can fail an otherwise passing suite.
  CHECK(run_cli("verify " + scenario_arg("fig3-1") + " --suite residual --tol 1e-30").code == 1);
}

TEST_CASE("exit codes") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("build").code == 2);
  CHECK(run_cli("--version").code == 0);

  const CliRun fig24 = run_cli("build " + scenario_arg("fig2-4"));
  CHECK(fig24.code == 3);
  CHECK(fig24.err.find("a12") != std::string::npos);
  CHECK(run_cli("stem " + scenario_arg("fig2-4") + " --t 1").code == 3);
  CHECK(run_cli("verify " + scenario_arg("fig2-4")).code == 3);

  const std::string missing = write_scratch(R"({"case": "c2_1", "branch": "first", "k": [-1, -2], "p3": 1})");
  const CliRun m = run_cli("build --scenario '" + missing + "'");
  CHECK(m.code == 2);
  CHECK(m.err.find("missing field k[2]") != std::string::npos);
  std::filesystem::remove(missing);

  const std::string broken = write_scratch("{\"case\": ");
  CHECK(run_cli("build --scenario '" + broken + "'").code == 2);
  std::filesystem::remove(broken);

  const std::string degenerate = write_scratch(R"({"case": "w2", "k": [1, 2, 0], "p3": 1})");
  CHECK(run_cli("build --scenario '" + degenerate + "'").code == 3);
  std::filesystem::remove(degenerate);

  CHECK(run_cli("build --scenario /nonexistent/scenario.json").code == 4);
  const std::string sc = scenario_arg("fig2-1");
  CHECK(run_cli("sample " + sc + " --t 0 --grid 0,1,2,0,1,2 --out /nonexistent/dir/u.csv").code == 4);
  CHECK(run_cli("stem " + sc + " --t 1 --out /nonexistent/dir/s.csv").code == 4);

  CHECK(run_cli("section " + sc + " --t 1 --line arm:7").code == 2);
  CHECK(run_cli("section " + sc + " --t 1 --line arm:1-2").code == 2);
  CHECK(run_cli("section " + sc + " --t 1 --line sideways").code == 2);
  CHECK(run_cli("section " + scenario_arg("generic") + " --t 1 --line arm:1").code == 2);
  CHECK(run_cli("verify " + sc + " --suite everything").code == 2);
  CHECK(run_cli("sample " + sc + " --t 0 --grid 0,1,2,0,1").code == 2);
  CHECK(run_cli("sample " + sc + " --t 0 --grid 0,1,2.5,0,1,2").code == 2);
  CHECK(run_cli("sample " + sc + " --t abc --grid 0,1,2,0,1,2").code == 2);
  CHECK(run_cli("sample " + sc + " --t 0 --grid 0,1,2,0,1,2 --format xml").code == 2);
  CHECK(run_cli("stem " + scenario_arg("generic") + " --t 1").code == 2);
}
