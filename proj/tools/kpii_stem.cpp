// kpii-stem: scenario-driven front end for the resonant KPII 3-soliton library.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kpii/format.hpp"
#include "kpii/geometry.hpp"
#include "kpii/kernels.hpp"
#include "kpii/scenario.hpp"
#include "kpii/verify.hpp"

using namespace kpii;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kInadmissible = 3, kIo = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string scenario;
  std::string t;
  std::string grid;
  std::string out;
  std::string format = "csv";
  std::string suite = "all";
  std::optional<double> tol;
  std::string line = "perp-mid";
  std::string range = "-20,20";
  int n = 401;
};

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v))
      throw UsageError("bad number \"" + item + "\" in " + what);
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(what + " is empty");
  return out;
}

double single_t(const Options& o) {
  if (o.t.empty()) throw UsageError("--t is required");
  const auto ts = parse_numbers(o.t, "--t");
  if (ts.size() != 1) throw UsageError("--t takes a single value for this command");
  return ts[0];
}

GridSpec parse_grid(const std::string& text) {
  if (text.empty()) throw UsageError("--grid is required");
  const auto v = parse_numbers(text, "--grid");
  if (v.size() != 6) throw UsageError("--grid needs xmin,xmax,nx,ymin,ymax,ny");
  GridSpec g{v[0], v[1], static_cast<int>(v[2]), v[3], v[4], static_cast<int>(v[5])};
  if (v[2] != g.nx || v[5] != g.ny || g.nx < 1 || g.ny < 1) throw UsageError("grid counts must be positive integers");
  if (!(g.xmax >= g.xmin && g.ymax >= g.ymin)) throw UsageError("grid ranges must be increasing");
  return g;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw IoError("cannot write " + o.out);
  f << text;
  f.close();
  if (!f) throw IoError("write failed for " + o.out);
}

void require_format(const Options& o) {
  if (o.format != "csv" && o.format != "json") throw UsageError("--format must be csv or json");
}

ordered_json opt_num(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(); }

ordered_json arm_json(const ArmDescriptor& a) {
  return {{"label", label_name(a.label)},
          {"amplitude", a.amplitude},
          {"K", a.K},
          {"P", a.P},
          {"W", a.W},
          {"offset", a.profile_offset},
          {"vx", opt_num(a.velocity.vx)},
          {"vy", opt_num(a.velocity.vy)}};
}

ordered_json region_list(const std::vector<CatalogArm>& arms) {
  ordered_json out = ordered_json::array();
  for (const auto& c : arms) {
    ordered_json j = {{"region", region_name(c.region)}};
    j.update(arm_json(c.arm));
    out.push_back(j);
  }
  return out;
}

struct Loaded {
  Scenario sc;
  ResonantSolution sol;
};

Loaded load(const Options& o) {
  if (o.scenario.empty()) throw UsageError("--scenario is required");
  Scenario sc = load_scenario(o.scenario);
  return {sc, build_scenario(sc)};
}

AsymptoticCatalog catalog_or_usage(const ResonantSolution& sol) {
  if (sol.spec.id == CaseId::Generic) throw UsageError("the generic case has no arm catalog");
  return arm_catalog(sol);
}

int cmd_build(const Options& o) {
  const Loaded L = load(o);
  const auto& sol = L.sol;
  ordered_json j;
  j["version"] = KPII_VERSION;
  j["scenario"] = scenario_json(L.sc);
  j["resolved"] = {{"k", sol.params.k}, {"p", sol.params.p}, {"xi0", sol.params.xi0}};
  j["omega"] = sol.omega;
  j["a12"] = opt_num(sol.a12);
  j["resonance"] = {{"12", kind_name(sol.resonance.k12)},
                    {"13", kind_name(sol.resonance.k13)},
                    {"23", kind_name(sol.resonance.k23)}};
  ordered_json terms = ordered_json::array();
  for (const auto& t : sol.tau.terms())
    terms.push_back({{"coeff", t.coeff}, {"kx", t.kx}, {"py", t.py}, {"wt", t.wt}, {"phase", t.phase}});
  j["tau"] = terms;
  if (sol.spec.id == CaseId::Generic) {
    j["catalog"] = nullptr;
  } else {
    const AsymptoticCatalog cat = arm_catalog(sol);
    j["catalog"] = {{"axis", std::string(1, cat.axis)},
                    {"regime_heuristic", cat.regime_heuristic},
                    {"alternate_regime", cat.alternate_regime},
                    {"before", region_list(cat.before)},
                    {"after", region_list(cat.after)},
                    {"stem_past", arm_json(cat.stem_past)},
                    {"stem_future", arm_json(cat.stem_future)}};
    ordered_json rows = ordered_json::array();
    for (const auto& r : velocity_table(sol))
      rows.push_back({{"label", label_name(r.label)},
                      {"vx", opt_num(r.velocity.vx)},
                      {"vy", opt_num(r.velocity.vy)},
                      {"amplitude", r.amplitude}});
    j["velocity_table"] = rows;
  }
  emit(o, dump_json(j));
  return kOk;
}

int cmd_sample(const Options& o) {
  require_format(o);
  const double t = single_t(o);
  const GridSpec g = parse_grid(o.grid);
  const Loaded L = load(o);
  const std::vector<double> u = sample_grid(L.sol.tau, g, t);
  const std::string id = case_name(L.sc.spec.id);
  if (o.format == "json") {
    ordered_json j;
    j["version"] = KPII_VERSION;
    j["case"] = id;
    j["scenario"] = scenario_json(L.sc);
    j["t"] = t;
    j["x_range"] = {g.xmin, g.xmax, g.nx};
    j["y_range"] = {g.ymin, g.ymax, g.ny};
    j["values"] = u;
    emit(o, dump_json(j, 0));
    return kOk;
  }
  std::string text = "# " + csv_header(id, t) + "\nx,y,u\n";
  text.reserve(text.size() + u.size() * 40);
  for (int jy = 0; jy < g.ny; ++jy)
    for (int ix = 0; ix < g.nx; ++ix) {
      text += fmt_num(g.x(ix));
      text += ',';
      text += fmt_num(g.y(jy));
      text += ',';
      text += fmt_num(u[static_cast<std::size_t>(jy) * g.nx + ix]);
      text += '\n';
    }
  emit(o, text);
  return kOk;
}

int cmd_stem(const Options& o) {
  require_format(o);
  if (o.t.empty()) throw UsageError("--t is required");
  const auto ts = parse_numbers(o.t, "--t");
  const Loaded L = load(o);
  const AsymptoticCatalog cat = catalog_or_usage(L.sol);
  const std::string id = case_name(L.sc.spec.id);
  CsvTable table;
  table.comments.push_back("kpii-stem v" KPII_VERSION " case=" + id + " t=" + o.t);
  table.columns = {"t", "stem", "ax", "ay", "bx", "by", "length", "length_formula",
                   "mid_x", "mid_y", "midpoint_amplitude", "valid", "closed_form_checked"};
  ordered_json rows = ordered_json::array();
  for (double t : ts) {
    const StemReport r = stem_endpoints(L.sol, cat, t, L.sc.t_min);
    std::optional<double> lf;
    try {
      lf = stem_length_formula(L.sol, cat, t);
    } catch (const UnsupportedFormula&) {
    }
    table.rows.push_back({fmt_num(t), label_name(r.stem), fmt_num(r.endpoint_a[0]), fmt_num(r.endpoint_a[1]),
                          fmt_num(r.endpoint_b[0]), fmt_num(r.endpoint_b[1]), fmt_num(r.length),
                          lf ? fmt_num(*lf) : "", fmt_num(r.midpoint[0]), fmt_num(r.midpoint[1]),
                          fmt_num(r.midpoint_amplitude), r.valid ? "true" : "false",
                          r.closed_form_checked ? "true" : "false"});
    rows.push_back({{"t", t},
                    {"stem", label_name(r.stem)},
                    {"endpoint_a", r.endpoint_a},
                    {"endpoint_b", r.endpoint_b},
                    {"length", r.length},
                    {"length_formula", opt_num(lf)},
                    {"midpoint", r.midpoint},
                    {"midpoint_amplitude", r.midpoint_amplitude},
                    {"valid", r.valid},
                    {"closed_form_checked", r.closed_form_checked}});
  }
  if (o.format == "json") {
    emit(o, dump_json({{"version", KPII_VERSION}, {"case", id}, {"scenario", scenario_json(L.sc)}, {"reports", rows}}));
  } else {
    std::ostringstream ss;
    write_csv(ss, table);
    emit(o, ss.str());
  }
  return kOk;
}

// --- verify -----------------------------------------------------------------

struct Certificate {
  ordered_json checks = ordered_json::array();
  bool pass = true;

  void add(const std::string& name, double value, double tol, bool ok, const std::string& note = "") {
    ordered_json c = {{"name", name}, {"value", value}, {"tol", tol}, {"pass", ok}};
    if (!note.empty()) c["note"] = note;
    checks.push_back(c);
    pass = pass && ok;
  }
  void skip(const std::string& name, const std::string& note) {
    checks.push_back({{"name", name}, {"skipped", true}, {"note", note}});
  }
};

void suite_residual(const ResonantSolution& sol, const Options& o, Certificate& cert) {
  const double tol = o.tol.value_or(1e-8);
  const auto rep = kp_residual(sol.tau, random_points(1000, 1), tol);
  cert.add("residual.max_abs", rep.max_abs_residual, tol, rep.max_abs_residual < tol);
}

void suite_limits(const Loaded& L, const Options& o, Certificate& cert) {
  const double tol = o.tol.value_or(1e-4);
  const auto pts = random_points(200, 2, limit_box());
  if (L.sol.spec.id != CaseId::Generic) {
    const LimitStudy st = limit_convergence(L.sol, pts);
    cert.add("limits.final_deviation", st.final_deviation, tol, st.final_deviation < tol);
    double worst = 0.0;
    const std::size_t n = st.rungs.size();
    for (std::size_t i = n - 2; i < n; ++i) worst = std::max(worst, st.rungs[i].deviation / st.rungs[i - 1].deviation);
    cert.add("limits.tail_ratio", worst, 1.0, st.monotone_tail, "largest deviation ratio over the last three rungs");
    return;
  }
  if (!L.sc.intent) {
    cert.skip("limits", "generic scenario without a resonant intent");
    return;
  }
  const ResonantSolution templ = intent_template(L.sc);
  const double dev = limit_deviation(L.sol, templ, pts);
  cert.add("limits.intent_deviation", dev, tol, dev < tol, "against the " + case_name(*L.sc.intent) + " template");
}

std::vector<std::pair<double, ArmDescriptor>> timed_arms(const AsymptoticCatalog& cat, double T) {
  std::vector<std::pair<double, ArmDescriptor>> out;
  for (const auto& c : cat.before) out.emplace_back(-T, c.arm);
  out.emplace_back(-T, cat.stem_past);
  for (const auto& c : cat.after) out.emplace_back(T, c.arm);
  out.emplace_back(T, cat.stem_future);
  return out;
}

std::string arm_tag(double t, const ArmDescriptor& a) { return "t=" + fmt_num(t) + ".arm=" + label_name(a.label); }

void suite_asymptotics(const ResonantSolution& sol, const Options& o, Certificate& cert) {
  if (sol.spec.id == CaseId::Generic) {
    cert.skip("asymptotics", "generic case has no arm catalog");
    return;
  }
  const double tol = o.tol.value_or(1e-3);
  const AsymptoticCatalog cat = arm_catalog(sol);
  for (const auto& [t, arm] : timed_arms(cat, 20.0)) {
    const double d20 = asymptotic_match(sol, arm, t).deviation;
    const double d40 = asymptotic_match(sol, arm, 2 * t).deviation;
    cert.add("asymptotics." + arm_tag(t, arm), d20, tol, d20 < tol);
    cert.add("asymptotics.decay." + arm_tag(t, arm), d40, std::max(d20, kMatchFloor), d40 <= std::max(d20, kMatchFloor),
             "deviation at twice the time");
  }
  // Negative control: the stem's section against the most different arm profile.
  for (const double t : {-20.0, 20.0}) {
    const ArmDescriptor& stem = t < 0 ? cat.stem_past : cat.stem_future;
    const auto& arms = t < 0 ? cat.before : cat.after;
    const ArmDescriptor* other = nullptr;
    for (const auto& c : arms)
      if (!other || std::abs(c.arm.amplitude - stem.amplitude) > std::abs(other->amplitude - stem.amplitude))
        other = &c.arm;
    const double d = asymptotic_match(sol, stem, t, *other).deviation;
    cert.add("asymptotics.negative_control." + arm_tag(t, stem) + ".profile=" + label_name(other->label), d, 0.1,
             d > 0.1, "must exceed the tolerance");
  }
}

void suite_ridge(const ResonantSolution& sol, const Options& o, Certificate& cert) {
  if (sol.spec.id == CaseId::Generic) {
    cert.skip("ridge", "generic case has no arm catalog");
    return;
  }
  const double tol = o.tol.value_or(1e-4);
  const AsymptoticCatalog cat = arm_catalog(sol);
  for (const auto& [t, arm] : timed_arms(cat, 20.0)) {
    const ArmSection sec = arm_section(sol, arm, t);
    const RidgeTrace tr = ridge_trace(sol, t, sec.line, sec.anchor);
    const double d = line_distance(tr.fitted_line, sec.line);
    cert.add("ridge.line." + arm_tag(t, arm), d, tol, d < tol);
  }
  for (const double t : {-20.0, 20.0}) {
    const ArmDescriptor& stem = t < 0 ? cat.stem_past : cat.stem_future;
    const StemReport r = stem_endpoints(sol, cat, t, 0.0);
    RidgeOptions opt;
    opt.n_scans = 3;
    opt.span = 1.0;
    const RidgeTrace tr = ridge_trace(sol, t, trajectory_line(stem, t), r.midpoint, opt);
    const double d = std::abs(tr.samples[tr.samples.size() / 2].value - stem.amplitude);
    cert.add("ridge.stem_value." + arm_tag(t, stem), d, o.tol.value_or(1e-3), d < o.tol.value_or(1e-3),
             "ridge height at the stem midpoint minus the stem amplitude");
  }
}

int cmd_verify(const Options& o) {
  static const std::vector<std::string> suites = {"residual", "limits", "asymptotics", "ridge", "all"};
  if (std::find(suites.begin(), suites.end(), o.suite) == suites.end())
    throw UsageError("--suite must be one of residual|limits|asymptotics|ridge|all");
  const Loaded L = load(o);
  Certificate cert;
  const bool all = o.suite == "all";
  if (all || o.suite == "residual") suite_residual(L.sol, o, cert);
  if (all || o.suite == "limits") suite_limits(L, o, cert);
  if (all || o.suite == "asymptotics") suite_asymptotics(L.sol, o, cert);
  if (all || o.suite == "ridge") suite_ridge(L.sol, o, cert);
  ordered_json j = {{"version", KPII_VERSION},
                    {"scenario", scenario_json(L.sc)},
                    {"suite", o.suite},
                    {"checks", cert.checks},
                    {"pass", cert.pass}};
  emit(o, dump_json(j));
  return cert.pass ? kOk : kFail;
}

// --- section ----------------------------------------------------------------

const ArmDescriptor& find_arm(const AsymptoticCatalog& cat, const std::string& name) {
  const auto label = parse_label(name);
  if (!label) throw UsageError("bad arm label \"" + name + "\"");
  for (const auto* list : {&cat.before, &cat.after})
    for (const auto& c : *list)
      if (c.arm.label == *label) return c.arm;
  if (cat.stem_past.label == *label) return cat.stem_past;
  if (cat.stem_future.label == *label) return cat.stem_future;
  throw UsageError("arm " + name + " is not in this solution's catalog");
}

int cmd_section(const Options& o) {
  require_format(o);
  const double t = single_t(o);
  const auto range = parse_numbers(o.range, "--range");
  if (range.size() != 2) throw UsageError("--range needs s0,s1");
  if (o.n < 2) throw UsageError("--n must be at least 2");
  const Loaded L = load(o);
  Line line;
  Vec2 anchor{0.0, 0.0};
  std::optional<ArmDescriptor> arm;
  const auto colon = o.line.find(':');
  const std::string kind = o.line.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : o.line.substr(colon + 1);
  if (kind == "abc") {
    const auto v = parse_numbers(arg, "--line abc");
    if (v.size() != 3) throw UsageError("--line abc needs A,B,C");
    if (v[0] == 0.0 && v[1] == 0.0) throw UsageError("--line abc is degenerate");
    line = normalize({v[0], v[1], v[2]});
    if (L.sol.spec.id != CaseId::Generic) anchor = stem_endpoints(L.sol, t, 0.0).midpoint;
  } else if (kind == "arm" || kind == "perp" || kind == "perp-mid") {
    const AsymptoticCatalog cat = catalog_or_usage(L.sol);
    anchor = stem_endpoints(L.sol, cat, t, 0.0).midpoint;
    if (kind == "perp-mid") {
      if (!arg.empty()) throw UsageError("--line perp-mid takes no argument");
      arm = t <= 0.0 ? cat.stem_past : cat.stem_future;
    } else {
      arm = find_arm(cat, arg);
    }
    line = trajectory_line(*arm, t);
    if (kind != "arm") {
      anchor = section_point(line, anchor, 0.0);
      line = perpendicular_through(line, anchor);
    }
  } else {
    throw UsageError("--line must be arm:<label>, perp:<label>, perp-mid or abc:A,B,C");
  }
  const std::string id = case_name(L.sc.spec.id);
  CsvTable table;
  table.comments.push_back(csv_header(id, t));
  table.comments.push_back("line=" + o.line + " A=" + fmt_num(line.A) + " B=" + fmt_num(line.B) + " C=" + fmt_num(line.C));
  table.columns = {"s", "x", "y", "u", "u_arm"};
  ordered_json rows = ordered_json::array();
  for (const auto& [s, u] : cross_section(L.sol, line, anchor, range[0], range[1], o.n, t)) {
    const Vec2 p = section_point(line, anchor, s);
    const std::optional<double> ua = arm ? std::optional(arm_profile(*arm, p[0], p[1], t)) : std::nullopt;
    table.rows.push_back({fmt_num(s), fmt_num(p[0]), fmt_num(p[1]), fmt_num(u), ua ? fmt_num(*ua) : ""});
    rows.push_back({{"s", s}, {"x", p[0]}, {"y", p[1]}, {"u", u}, {"u_arm", opt_num(ua)}});
  }
  if (o.format == "json") {
    emit(o, dump_json({{"version", KPII_VERSION},
                       {"case", id},
                       {"t", t},
                       {"line", {line.A, line.B, line.C}},
                       {"samples", rows}}));
  } else {
    std::ostringstream ss;
    write_csv(ss, table);
    emit(o, ss.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonant KPII 3-soliton stems: build, sample, stem, verify, section"};
  app.set_version_flag("--version", std::string("kpii-stem ") + KPII_VERSION);
  app.require_subcommand(1);
  Options o;

  auto scenario = [&](CLI::App* c) { c->add_option("--scenario", o.scenario, "Scenario JSON file")->required(); };
  auto output = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output path (default stdout)");
    c->add_option("--format", o.format, "csv or json");
  };

  auto* build = app.add_subcommand("build", "Resolve parameters and print the solution summary");
  scenario(build);
  build->add_option("--out", o.out, "Output path (default stdout)");

  auto* sample = app.add_subcommand("sample", "Sample u on a grid");
  scenario(sample);
  sample->add_option("--t", o.t, "Time")->required();
  sample->add_option("--grid", o.grid, "xmin,xmax,nx,ymin,ymax,ny")->required();
  output(sample);

  auto* stem = app.add_subcommand("stem", "Stem endpoints, lengths and midpoint amplitudes");
  scenario(stem);
  stem->add_option("--t", o.t, "Time or comma-separated list")->required();
  output(stem);

  auto* verify = app.add_subcommand("verify", "Run a verification suite and print a certificate");
  scenario(verify);
  verify->add_option("--suite", o.suite, "residual|limits|asymptotics|ridge|all");
  verify->add_option("--tol", o.tol, "Override the suite tolerance");
  verify->add_option("--out", o.out, "Output path (default stdout)");

  auto* section = app.add_subcommand("section", "u along a line");
  scenario(section);
  section->add_option("--t", o.t, "Time")->required();
  section->add_option("--line", o.line, "arm:<label> | perp:<label> | perp-mid | abc:A,B,C");
  section->add_option("--range", o.range, "s0,s1 arclength range");
  section->add_option("--n", o.n, "Number of samples");
  output(section);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*build) return cmd_build(o);
    if (*sample) return cmd_sample(o);
    if (*stem) return cmd_stem(o);
    if (*verify) return cmd_verify(o);
    if (*section) return cmd_section(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const InadmissibleParameter& e) {
    std::cerr << "inadmissible: " << e.what() << '\n';
    return kInadmissible;
  } catch (const DegenerateParameter& e) {
    std::cerr << "inadmissible: " << e.what() << '\n';
    return kInadmissible;
  } catch (const IndeterminateResonance& e) {
    std::cerr << "inadmissible: " << e.what() << '\n';
    return kInadmissible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}
