#include "kpii/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "kpii/closed_forms.hpp"
#include "kpii/tropical.hpp"

namespace kpii {

std::string label_name(const Label& l) {
  std::string out;
  for (int j = 0; j < 3; ++j) {
    if (l.s[j] == 0) continue;
    if (l.s[j] < 0)
      out += '-';
    else if (!out.empty())
      out += '+';
    out += std::to_string(j + 1);
  }
  if (l.hat) out += '^';
  return out;
}

std::optional<Label> parse_label(const std::string& text) {
  Label l;
  std::string s = text;
  if (!s.empty() && s.back() == '^') {
    l.hat = true;
    s.pop_back();
  }
  int sign = 1;
  bool expect_digit = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (expect_digit && c >= '1' && c <= '3') {
      if (l.s[c - '1'] != 0) return std::nullopt;
      l.s[c - '1'] = sign;
      expect_digit = false;
    } else if (!expect_digit && (c == '+' || c == '-')) {
      sign = c == '+' ? 1 : -1;
      expect_digit = true;
    } else if (i == 0 && c == '-') {
      sign = -1;
    } else {
      return std::nullopt;
    }
  }
  if (expect_digit) return std::nullopt;
  const int first = *std::find_if(l.s.begin(), l.s.end(), [](int v) { return v != 0; });
  if (first < 0) return std::nullopt;
  return l;
}

Line normalize(const Line& l) {
  const double n = std::hypot(l.A, l.B);
  if (!(n > 0.0)) throw GeometryError("degenerate line: A = B = 0");
  double sgn = (l.A > 0 || (l.A == 0 && l.B > 0)) ? 1.0 : -1.0;
  return {sgn * l.A / n, sgn * l.B / n, sgn * l.C / n};
}

std::string region_name(Region r) {
  switch (r) {
    case Region::YMinus: return "y->-inf";
    case Region::YPlus: return "y->+inf";
    case Region::XMinus: return "x->-inf";
    case Region::XPlus: return "x->+inf";
  }
  return "?";
}

ArmDescriptor make_arm(const ResonantSolution& sol, const Label& label, double offset) {
  ArmDescriptor a;
  a.label = label;
  for (int j = 0; j < 3; ++j) {
    a.K += label.s[j] * sol.params.k[j];
    a.P += label.s[j] * sol.params.p[j];
    a.W += label.s[j] * sol.omega[j];
    a.c0 += label.s[j] * sol.params.xi0[j];
  }
  a.profile_offset = offset;
  a.c0 += offset;
  a.amplitude = 0.5 * a.K * a.K;
  a.velocity = table1_velocity(label, sol.params);
  return a;
}

namespace {

ArmDescriptor arm_from_edge(const ResonantSolution& sol, const TropicalEdge& e) {
  const double L = sol.a12 ? std::log(*sol.a12) : 0.0;
  return make_arm(sol, e.label, e.offset * L);
}

std::vector<CatalogArm> regions(const ResonantSolution& sol, const StemTopology& topo, char axis) {
  std::vector<CatalogArm> out;
  const int ax = axis == 'x' ? 0 : 1;
  for (const auto& junction : topo.junctions) {
    for (const auto& ja : junction) {
      const bool plus = ja.outward[ax] >= 0;
      Region r = axis == 'x' ? (plus ? Region::XPlus : Region::XMinus) : (plus ? Region::YPlus : Region::YMinus);
      out.push_back({r, arm_from_edge(sol, ja.edge)});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const CatalogArm& a, const CatalogArm& b) {
    return static_cast<int>(a.region) < static_cast<int>(b.region);
  });
  return out;
}

std::array<std::array<ArmDescriptor, 2>, 2> junction_arms(const ResonantSolution& sol,
                                                        const StemTopology& topo) {
  std::array<std::array<ArmDescriptor, 2>, 2> out;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i) out[k][i] = arm_from_edge(sol, topo.junctions[k][i].edge);
  return out;
}

double rel_dist(const Vec2& a, const Vec2& b) {
  const double scale = std::max({1.0, std::abs(a[0]), std::abs(a[1]), std::abs(b[0]), std::abs(b[1])});
  return std::hypot(a[0] - b[0], a[1] - b[1]) / scale;
}

}  // namespace

AsymptoticCatalog arm_catalog(const ResonantSolution& sol) {
  if (sol.spec.id == CaseId::Generic) throw UnsupportedOperation("no catalog for the generic case");
  const StemTopology past = stem_topology(sol, -1.0);
  const StemTopology future = stem_topology(sol, 1.0);
  AsymptoticCatalog cat;
  cat.stem_past = arm_from_edge(sol, past.stem);
  cat.stem_future = arm_from_edge(sol, future.stem);
  cat.past_junctions = junction_arms(sol, past);
  cat.future_junctions = junction_arms(sol, future);
  if (sol.spec.id == CaseId::C2_1) {
    cat.regime_heuristic = true;
    cat.alternate_regime = !(cat.stem_past.label == Label{{1, 1, 1}, true});
  }
  if (sol.spec.id == CaseId::C2_4) cat.regime_heuristic = true;
  cat.axis = (cat.alternate_regime || sol.spec.id == CaseId::C2_4) ? 'x' : 'y';
  cat.before = regions(sol, past, cat.axis);
  cat.after = regions(sol, future, cat.axis);
  return cat;
}

double arm_profile(const ArmDescriptor& arm, double x, double y, double t) {
  const double xi = arm.K * x + arm.P * y + arm.W * t + arm.c0;
  const double s = 1.0 / std::cosh(0.5 * xi);
  return arm.amplitude * s * s;
}

Line trajectory_line(const ArmDescriptor& arm, double t) { return normalize(arm.raw_line(t)); }

std::optional<Vec2> intersect_lines(const Line& l1, const Line& l2) {
  const double det = l1.A * l2.B - l1.B * l2.A;
  const double scale = std::hypot(l1.A, l1.B) * std::hypot(l2.A, l2.B);
  if (!(std::abs(det) > 1e-12 * scale)) return std::nullopt;
  return Vec2{(l1.B * l2.C - l2.B * l1.C) / det, (l2.A * l1.C - l1.A * l2.C) / det};
}

std::pair<Vec2, Vec2> geometric_endpoints(const AsymptoticCatalog& cat, double t) {
  const bool past = t <= 0.0;
  const ArmDescriptor& stem = past ? cat.stem_past : cat.stem_future;
  const auto& junctions = past ? cat.past_junctions : cat.future_junctions;
  const Line ls = trajectory_line(stem, t);
  Vec2 ends[2];
  for (int k = 0; k < 2; ++k) {
    // The three lines at a junction are concurrent; use the arm crossing the
    // stem at the larger angle.
    const Line a0 = trajectory_line(junctions[k][0], t);
    const Line a1 = trajectory_line(junctions[k][1], t);
    const double s0 = std::abs(ls.A * a0.B - ls.B * a0.A);
    const double s1 = std::abs(ls.A * a1.B - ls.B * a1.A);
    auto p = intersect_lines(ls, s0 >= s1 ? a0 : a1);
    if (!p) throw GeometryError("stem parallel to both junction arms");
    ends[k] = *p;
  }
  return {ends[0], ends[1]};
}

StemReport stem_endpoints(const ResonantSolution& sol, double t, double t_min) {
  return stem_endpoints(sol, arm_catalog(sol), t, t_min);
}

StemReport stem_endpoints(const ResonantSolution& sol, const AsymptoticCatalog& cat, double t,
                          double t_min) {
  StemReport r;
  r.t = t;
  r.stem = (t <= 0.0 ? cat.stem_past : cat.stem_future).label;
  auto [a, b] = geometric_endpoints(cat, t);
  if (auto cf = closed_form_endpoints(sol, r.stem, t)) {
    const double direct = std::max(rel_dist(a, cf->first), rel_dist(b, cf->second));
    const double swapped = std::max(rel_dist(a, cf->second), rel_dist(b, cf->first));
    if (std::min(direct, swapped) > 1e-9)
      throw ConsistencyError("closed-form and geometric stem endpoints disagree");
    r.closed_form_checked = true;
  }
  r.endpoint_a = {a[0] + 0.0, a[1] + 0.0};
  r.endpoint_b = {b[0] + 0.0, b[1] + 0.0};
  r.length = std::hypot(a[0] - b[0], a[1] - b[1]);
  r.midpoint = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
  r.midpoint_amplitude = eval_u_value(sol.tau, {r.midpoint[0], r.midpoint[1], t});
  r.valid = std::abs(t) >= t_min;
  return r;
}

double stem_length_formula(const ResonantSolution& sol, double t) {
  return stem_length_formula(sol, arm_catalog(sol), t);
}

double stem_length_formula(const ResonantSolution& sol, const AsymptoticCatalog& cat, double t) {
  const Label& stem = (t <= 0.0 ? cat.stem_past : cat.stem_future).label;
  if (auto v = closed_form_length(sol, stem, t)) return *v;
  throw UnsupportedFormula("no closed-form stem length for " + case_name(sol.spec.id) + " stem " +
                           label_name(stem));
}

double midpoint_amplitude(const ResonantSolution& sol, double t) {
  return stem_endpoints(sol, t).midpoint_amplitude;
}

Vec2 section_point(const Line& line, const Vec2& anchor, double s) {
  const Line l = normalize(line);
  const double d = l.A * anchor[0] + l.B * anchor[1] + l.C;
  const Vec2 base{anchor[0] - d * l.A, anchor[1] - d * l.B};
  return {base[0] - s * l.B, base[1] + s * l.A};
}

std::vector<std::pair<double, double>> cross_section(const ResonantSolution& sol, const Line& line,
                                                     const Vec2& anchor, double s0, double s1,
                                                     int n, double t) {
  if (n < 2) throw std::invalid_argument("cross section needs at least 2 samples");
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double s = s0 + (s1 - s0) * i / (n - 1);
    const Vec2 p = section_point(line, anchor, s);
    out.emplace_back(s, eval_u_value(sol.tau, {p[0], p[1], t}));
  }
  return out;
}

std::pair<double, double> section_max(const ResonantSolution& sol, const Line& line,
                                      const Vec2& anchor, double s0, double s1, int n, double t) {
  auto samples = cross_section(sol, line, anchor, s0, s1, n, t);
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].second > samples[best].second) best = i;
  const double lo = samples[best == 0 ? 0 : best - 1].first;
  const double hi = samples[std::min(best + 1, samples.size() - 1)].first;
  auto f = [&](double s) {
    const Vec2 p = section_point(line, anchor, s);
    return eval_u_value(sol.tau, {p[0], p[1], t});
  };
  const double s = golden_max(f, lo, hi);
  return {s, f(s)};
}

SectionExtremum stem_section_extremum(const ResonantSolution& sol, double t) {
  const AsymptoticCatalog cat = arm_catalog(sol);
  const StemReport r = stem_endpoints(sol, cat, t, 0.0);
  const Line ls = trajectory_line(t <= 0.0 ? cat.stem_past : cat.stem_future, t);
  const double h = 0.35 * r.length;
  const auto samples = cross_section(sol, ls, r.midpoint, -h, h, 401, t);
  const std::size_t n = samples.size();
  // Prefer a slope sign change closest to the midpoint, else the flattest point.
  std::size_t best = n / 2;
  double best_key = INFINITY;
  bool sign_change = false;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dl = samples[i].second - samples[i - 1].second;
    const double dr = samples[i + 1].second - samples[i].second;
    const bool turn = (dl > 0 && dr <= 0) || (dl < 0 && dr >= 0);
    const double key = turn ? std::abs(samples[i].first) : std::abs(dl + dr);
    if (turn && !sign_change) {
      sign_change = true;
      best_key = INFINITY;
    }
    if (turn == sign_change && key < best_key) {
      best_key = key;
      best = i;
    }
  }
  best = std::clamp<std::size_t>(best, 1, n - 2);
  const double u0 = samples[best].second;
  const bool is_max = u0 >= 0.5 * (samples[best - 1].second + samples[best + 1].second);
  auto f = [&](double s) {
    const Vec2 p = section_point(ls, r.midpoint, s);
    const double u = eval_u_value(sol.tau, {p[0], p[1], t});
    return is_max ? u : -u;
  };
  const double s = golden_max(f, samples[best - 1].first, samples[best + 1].first);
  return {s, is_max ? f(s) : -f(s), is_max};
}

Line perpendicular_through(const Line& line, const Vec2& point) {
  const Line l = normalize(line);
  return normalize({-l.B, l.A, l.B * point[0] - l.A * point[1]});
}

namespace {

std::optional<double> ratio(double num, double den, double scale) {
  if (std::abs(den) <= 1e-14 * scale) return std::nullopt;
  return num / den;
}

}  // namespace

Velocity table1_velocity(const Label& label, const SolitonParams& params) {
  const auto& k = params.k;
  const auto& p = params.p;
  std::vector<int> idx;
  for (int j = 0; j < 3; ++j)
    if (label.s[j] != 0) idx.push_back(j);
  const double ks = std::abs(k[0]) + std::abs(k[1]) + std::abs(k[2]);
  const double ps = std::abs(p[0]) + std::abs(p[1]) + std::abs(p[2]) + ks;
  Velocity v;
  if (idx.size() == 1) {
    const double kj = k[idx[0]], pj = p[idx[0]];
    v.vx = kj * kj + 3 * pj * pj / (kj * kj);
    v.vy = ratio(kj * kj * kj * kj + 3 * pj * pj, kj * pj, ks * ps);
  } else if (idx.size() == 2) {
    const double ki = k[idx[0]], kj = k[idx[1]], pi = p[idx[0]], pj = p[idx[1]];
    if (label.s[idx[1]] > 0) {
      const double d = 3 * pi * pi * kj + 3 * pj * pj * ki;
      if (auto r = ratio(d, ki * kj * (ki + kj), ks * ks * ks)) v.vx = ki * ki - ki * kj + kj * kj + *r;
      if (std::abs(pi + pj) > 1e-14 * ps) v.vy = (ki * ki * ki + kj * kj * kj) / (pi + pj) + d / (ki * kj * (pi + pj));
    } else {
      const double d = 3 * pi * pi * kj - 3 * pj * pj * ki;
      if (auto r = ratio(d, ki * kj * (ki - kj), ks * ks * ks)) v.vx = ki * ki + ki * kj + kj * kj + *r;
      if (std::abs(pi - pj) > 1e-14 * ps) v.vy = (ki * ki * ki - kj * kj * kj) / (pi - pj) + d / (ki * kj * (pi - pj));
    }
  } else {
    const auto& s = label.s;
    const double kc = s[0] * k[0] * k[0] * k[0] + s[1] * k[1] * k[1] * k[1] + s[2] * k[2] * k[2] * k[2];
    const double ksum = s[0] * k[0] + s[1] * k[1] + s[2] * k[2];
    const double psum = s[0] * p[0] + s[1] * p[1] + s[2] * p[2];
    const double delta = 3 * (s[0] * p[0] * p[0] * k[1] * k[2] + s[1] * p[1] * p[1] * k[0] * k[2] +
                              s[2] * p[2] * p[2] * k[0] * k[1]);
    const double kprod = k[0] * k[1] * k[2];
    if (std::abs(ksum) > 1e-14 * ks) v.vx = kc / ksum + delta / (kprod * ksum);
    if (std::abs(psum) > 1e-14 * ps) v.vy = kc / psum + delta / (kprod * psum);
  }
  return v;
}

std::vector<VelocityRow> velocity_table(const ResonantSolution& sol) {
  const AsymptoticCatalog cat = arm_catalog(sol);
  std::vector<VelocityRow> rows;
  auto add = [&](const ArmDescriptor& a) {
    for (const auto& r : rows)
      if (r.label == a.label) return;
    rows.push_back({a.label, a.velocity, a.amplitude});
  };
  for (const auto& c : cat.before) add(c.arm);
  add(cat.stem_past);
  for (const auto& c : cat.after) add(c.arm);
  add(cat.stem_future);
  return rows;
}

}  // namespace kpii
