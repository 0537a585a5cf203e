#include "kpii/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kpii/kernels.hpp"
#include "kpii/tropical.hpp"

namespace kpii {

std::vector<Point> random_points(std::size_t n, std::uint64_t seed, const Box& box) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.xmin, box.xmax), uy(box.ymin, box.ymax),
      ut(box.tmin, box.tmax);
  std::vector<Point> out(n);
  for (auto& p : out) {
    p.x = ux(rng);
    p.y = uy(rng);
    p.t = ut(rng);
  }
  return out;
}

ResidualReport kp_residual(const ExpSumTau& tau, const std::vector<Point>& points, double tol) {
  const std::vector<double> r = residual_sweep(tau, points);
  ResidualReport rep;
  rep.n_points = points.size();
  for (std::size_t i = 0; i < r.size(); ++i) {
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(r[i]));
    if (!(std::abs(r[i]) <= tol)) rep.points_exceeding_tol.push_back({points[i].x, points[i].y, points[i].t, r[i]});
  }
  return rep;
}

Box limit_box() { return {-2, 2, -2, 2, -0.2, 0.2}; }

std::vector<double> default_eps_ladder() { return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7}; }

std::array<double, 3> limit_xi_shift(CaseId id, double a13, double a23) {
  const double l13 = std::log(a13), l23 = std::log(a23);
  switch (id) {
    case CaseId::C2_1: return {0, 0, -l13 - l23};
    case CaseId::C2_2: return {-l13, 0, -l23};
    case CaseId::C2_3: return {0, -l23, -l13};
    case CaseId::C2_4: return {-l13, -l23, 0};
    case CaseId::M2: return {0, 0, -l13};
    case CaseId::C3_2: return {-l13, -l23, 0};
    default: return {0, 0, 0};
  }
}

namespace {

struct Shifts {
  double a12, a13, a23;
};

std::optional<Shifts> finite_shifts(const std::array<double, 3>& k, const std::array<double, 3>& p) {
  try {
    const PhaseShift a12 = phase_shift_param(k[0], p[0], k[1], p[1]);
    const PhaseShift a13 = phase_shift_param(k[0], p[0], k[2], p[2]);
    const PhaseShift a23 = phase_shift_param(k[1], p[1], k[2], p[2]);
    for (const auto& a : {a12, a13, a23})
      if (a.infinite || !(a.value > 0.0)) return std::nullopt;
    return Shifts{a12.value, a13.value, a23.value};
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::array<double, 3> perturbed_p(const SolitonParams& params, double eps, std::array<int, 2> signs) {
  std::array<double, 3> p = params.p;
  p[0] += signs[0] * eps * (1.0 + std::abs(p[0]));
  p[1] += signs[1] * eps * (1.0 + std::abs(p[1]));
  return p;
}

}  // namespace

ResonantSolution limit_family_member(const ResonantSolution& templ, double eps, std::array<int, 2> signs) {
  const auto p = perturbed_p(templ.params, eps, signs);
  const auto a = finite_shifts(templ.params.k, p);
  if (!a) throw InadmissibleFamily("family member has a non-positive or infinite a_ij");
  const auto shift = limit_xi_shift(templ.spec.id, a->a13, a->a23);
  std::array<double, 3> xi0 = templ.params.xi0;
  for (int j = 0; j < 3; ++j) xi0[j] += shift[j];
  return make_generic(templ.params.k, p, xi0);
}

std::array<int, 2> admissible_signs(const ResonantSolution& templ, const std::vector<double>& ladder) {
  if (templ.spec.id == CaseId::Generic) throw InadmissibleFamily("generic solution is not a limit template");
  for (const std::array<int, 2> s : {std::array{1, 1}, std::array{1, -1}, std::array{-1, 1}, std::array{-1, -1}}) {
    bool ok = true;
    for (double eps : ladder) ok = ok && finite_shifts(templ.params.k, perturbed_p(templ.params, eps, s)).has_value();
    if (ok) return s;
  }
  throw InadmissibleFamily("no sign pattern keeps every a_ij positive along the ladder");
}

double max_deviation(const ExpSumTau& a, const ExpSumTau& b, const std::vector<Point>& points) {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, std::abs(eval_u_value(a, p) - eval_u_value(b, p)));
  return m;
}

LimitStudy limit_convergence(const ResonantSolution& templ, const std::vector<Point>& points,
                             const std::vector<double>& ladder) {
  const auto signs = admissible_signs(templ, ladder);
  LimitStudy study;
  for (double eps : ladder) {
    const ResonantSolution g = limit_family_member(templ, eps, signs);
    const auto a = finite_shifts(g.params.k, g.params.p);
    study.rungs.push_back({eps, {a->a12, a->a13, a->a23}, max_deviation(g.tau, templ.tau, points)});
  }
  const std::size_t n = study.rungs.size();
  study.monotone_tail = n >= 3;
  for (std::size_t i = n >= 3 ? n - 2 : n; i < n; ++i)
    study.monotone_tail = study.monotone_tail && study.rungs[i].deviation <= study.rungs[i - 1].deviation;
  study.final_deviation = n ? study.rungs.back().deviation : 0.0;
  return study;
}

double limit_deviation(const ResonantSolution& generic, const ResonantSolution& templ,
                       const std::vector<Point>& points) {
  const auto a = finite_shifts(generic.params.k, generic.params.p);
  if (!a) throw InadmissibleFamily("generic solution has a non-positive or infinite a_ij");
  const auto shift = limit_xi_shift(templ.spec.id, a->a13, a->a23);
  std::array<double, 3> xi0 = generic.params.xi0;
  for (int j = 0; j < 3; ++j) xi0[j] += shift[j];
  const ResonantSolution g = make_generic(generic.params.k, generic.params.p, xi0);
  return max_deviation(g.tau, templ.tau, points);
}

ArmSection arm_section(const ResonantSolution& sol, const ArmDescriptor& arm, double t,
                       double junction_distance, double phase_half_width) {
  const std::vector<TropTerm> terms = trop_terms(sol);
  const std::vector<TropicalEdge> edges = tropical_edges(terms, t);
  const double L = sol.a12 ? std::log(*sol.a12) : 0.0;
  std::vector<Vec2> vertices;
  for (const auto& e : edges) {
    if (std::isfinite(e.lo)) vertices.push_back(e.at(e.lo));
    if (std::isfinite(e.hi)) vertices.push_back(e.at(e.hi));
  }
  const double norm = std::hypot(arm.K, arm.P);
  const Vec2 nu{arm.K / norm, arm.P / norm};
  // Slow arms are wide, so a full-width section may reach a neighbour. Take
  // the widest section that clears every other term by a safe margin, and
  // within it the anchor of largest clearance.
  constexpr double safe_margin = 15.0;
  const double widths[] = {phase_half_width, 0.8 * phase_half_width, 0.6 * phase_half_width,
                           0.4 * phase_half_width};
  const double ray_extent = 100.0 + 5.0 * std::abs(t);
  ArmSection best;
  best.line = trajectory_line(arm, t);
  double best_score = -INFINITY;
  for (double w : widths) {
    ArmSection cand = best;
    cand.clearance = -INFINITY;
    cand.half_width = w / norm;
    for (const auto& e : edges) {
      if (!(e.label == arm.label) || std::abs(e.offset * L - arm.profile_offset) > 1e-12 * (1.0 + std::abs(L)))
        continue;
      double lo = e.lo, hi = e.hi;
      if (!std::isfinite(lo) && !std::isfinite(hi)) {
        lo = -ray_extent;
        hi = ray_extent;
      } else if (!std::isfinite(lo)) {
        lo = hi - ray_extent - junction_distance;
      } else if (!std::isfinite(hi)) {
        hi = lo + ray_extent + junction_distance;
      }
      for (int i = 0; i <= 200; ++i) {
        const Vec2 c = e.at(lo + (hi - lo) * i / 200.0);
        bool near = false;
        for (const auto& v : vertices) near = near || std::hypot(c[0] - v[0], c[1] - v[1]) < junction_distance;
        if (near) continue;
        double clearance = INFINITY;
        for (int j = -20; j <= 20; ++j) {
          const double s = cand.half_width * j / 20.0;
          clearance = std::min(clearance, dominance_gap(terms, e.a, e.b, {c[0] + s * nu[0], c[1] + s * nu[1]}, t));
        }
        if (clearance > cand.clearance) {
          cand.clearance = clearance;
          cand.anchor = c;
        }
      }
    }
    if (!std::isfinite(cand.clearance)) continue;
    if (cand.clearance >= safe_margin) {
      best = cand;
      best_score = INFINITY;
      break;
    }
    if (std::min(cand.clearance, w) > best_score) {
      best_score = std::min(cand.clearance, w);
      best = cand;
    }
  }
  if (best_score == -INFINITY)
    throw AnchorNotFound("no junction-distant section for arm " + label_name(arm.label));
  return best;
}

MatchReport asymptotic_match(const ResonantSolution& sol, const ArmDescriptor& arm, double t,
                             const std::optional<ArmDescriptor>& profile, double junction_distance, int n) {
  MatchReport rep;
  rep.section = arm_section(sol, arm, t, junction_distance);
  const ArmDescriptor& prof = profile ? *profile : arm;
  const Line perp = perpendicular_through(rep.section.line, rep.section.anchor);
  const double h = rep.section.half_width;
  for (int i = 0; i < n; ++i) {
    const Vec2 p = section_point(perp, rep.section.anchor, -h + 2.0 * h * i / (n - 1));
    const double d = std::abs(eval_u_value(sol.tau, {p[0], p[1], t}) - arm_profile(prof, p[0], p[1], t));
    rep.deviation = std::max(rep.deviation, d);
  }
  return rep;
}

RidgeTrace ridge_trace(const ResonantSolution& sol, double t, const Line& approx_line, const Vec2& center,
                       const RidgeOptions& opt) {
  return ridge_trace(sol.tau, t, approx_line, center, opt);
}

RidgeTrace ridge_trace(const ExpSumTau& tau, double t, const Line& approx_line, const Vec2& center,
                       const RidgeOptions& opt) {
  const Line line = normalize(approx_line);
  RidgeTrace trace;
  for (int k = 0; k < opt.n_scans; ++k) {
    const double along = opt.n_scans == 1 ? 0.0 : -opt.span + 2.0 * opt.span * k / (opt.n_scans - 1);
    const Vec2 anchor = section_point(line, center, along);
    const Line perp = perpendicular_through(line, anchor);
    auto u_at = [&](double s) {
      const Vec2 p = section_point(perp, anchor, s);
      return eval_u_value(tau, {p[0], p[1], t});
    };
    std::vector<double> s(opt.n_samples), u(opt.n_samples);
    for (int i = 0; i < opt.n_samples; ++i) {
      s[i] = -opt.half_window + 2.0 * opt.half_window * i / (opt.n_samples - 1);
      u[i] = u_at(s[i]);
    }
    int best = -1;
    for (int i = 1; i + 1 < opt.n_samples; ++i)
      if (u[i] >= u[i - 1] && u[i] > u[i + 1] && (best < 0 || std::abs(s[i]) < std::abs(s[best]))) best = i;
    if (best < 0) continue;
    const double sm = golden_max(u_at, s[best - 1], s[best + 1]);
    trace.samples.push_back({anchor, section_point(perp, anchor, sm), u_at(sm)});
  }
  if (trace.samples.size() < 2 || 2 * static_cast<int>(trace.samples.size()) < opt.n_scans)
    throw RidgeNotFound("no local maximum on most scan lines");
  // Total least squares: the fitted direction is the principal axis.
  double cx = 0, cy = 0;
  for (const auto& r : trace.samples) {
    cx += r.ridge[0];
    cy += r.ridge[1];
  }
  cx /= trace.samples.size();
  cy /= trace.samples.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& r : trace.samples) {
    const double dx = r.ridge[0] - cx, dy = r.ridge[1] - cy;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  const double nx = -std::sin(theta), ny = std::cos(theta);
  trace.fitted_line = normalize({nx, ny, -(nx * cx + ny * cy)});
  return trace;
}

double line_distance(const Line& a, const Line& b) {
  const Line x = normalize(a), y = normalize(b);
  return std::max({std::abs(x.A - y.A), std::abs(x.B - y.B), std::abs(x.C - y.C)});
}

}  // namespace kpii
