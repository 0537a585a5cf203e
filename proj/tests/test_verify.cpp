#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kpii/verify.hpp"
#include "support.hpp"

using namespace kpii;

namespace {

ExpSumTau one_soliton(double k, double p) { return ExpSumTau({{1.0, 0, 0, 0, 0}, {1.0, k, p, omega(k, p), 0}}); }

const ArmDescriptor& find(const AsymptoticCatalog& cat, const char* label, bool after) {
  for (const auto& c : after ? cat.after : cat.before)
    if (label_name(c.arm.label) == label) return c.arm;
  FAIL("arm not in catalog: " << label);
  throw;
}

}  // namespace

TEST_CASE("random points") {
  const Box box{-1, 2, 3, 4, -5, -4};
  const auto a = random_points(500, 9, box), b = random_points(500, 9, box), c = random_points(500, 10, box);
  REQUIRE(a.size() == 500);
  bool same = true, inside = true, differ = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i].x == b[i].x && a[i].y == b[i].y && a[i].t == b[i].t;
    differ = differ || a[i].x != c[i].x;
    inside = inside && a[i].x >= -1 && a[i].x <= 2 && a[i].y >= 3 && a[i].y <= 4 && a[i].t >= -5 && a[i].t <= -4;
  }
  CHECK(same);
  CHECK(inside);
  CHECK(differ);
}

TEST_CASE("kp residual") {
  const ExpSumTau zero({{3.0, 0.5, -1, 2, 0}});
  const auto rz = kp_residual(zero, random_points(50, 1));
  CHECK(rz.max_abs_residual == 0.0);
  CHECK(rz.n_points == 50);

  const auto r1 = kp_residual(one_soliton(1.3, -0.7), random_points(100, 2, {-5, 5, -5, 5, -2, 2}));
  CHECK(r1.max_abs_residual < 1e-10);

  for (const auto& name : test::figure_scenarios()) {
    CAPTURE(name);
    const auto r = kp_residual(test::figure(name).tau, random_points(1000, 1));
    CHECK(r.max_abs_residual < 1e-8);
    CHECK(r.points_exceeding_tol.empty());
  }

  // A wrong dispersion relation is caught.
  const ExpSumTau bad({{1.0, 0, 0, 0, 0}, {1.0, 1.0, 0.5, 0.3, 0}});
  const auto rb = kp_residual(bad, random_points(100, 3, {-2, 2, -2, 2, -1, 1}), 1e-8);
  CHECK(rb.max_abs_residual > 1e-3);
  CHECK_FALSE(rb.points_exceeding_tol.empty());
  CHECK(rb.points_exceeding_tol.front()[3] != 0.0);
}

TEST_CASE("limit convergence for every case") {
  const auto pts = random_points(200, 2, limit_box());
  for (const auto& fc : test::figure_cases()) {
    CAPTURE(fc.scenario);
    const ResonantSolution templ = test::figure(fc.scenario);
    const LimitStudy st = limit_convergence(templ, pts);
    REQUIRE(st.rungs.size() == default_eps_ladder().size());
    CHECK(st.final_deviation < 1e-4);
    CHECK(st.monotone_tail);
    // The resonant a_ij have reached 1e6 (strong) or 1e-6 (weak).
    const auto& a = st.rungs.back().a;
    const std::array<Kind, 3> kinds = {templ.resonance.k12, templ.resonance.k13, templ.resonance.k23};
    for (int i = 0; i < 3; ++i) {
      if (kinds[i] == Kind::Strong) CHECK(a[i] >= 1e6);
      if (kinds[i] == Kind::Weak) CHECK(a[i] <= 1e-6);
    }
  }
}

TEST_CASE("limit helpers") {
  const ResonantSolution c21 = test::figure("fig2-1");
  const auto pts = random_points(50, 4, limit_box());
  CHECK(max_deviation(c21.tau, c21.tau, pts) == 0.0);

  const auto shift = limit_xi_shift(CaseId::C2_1, std::exp(2.0), std::exp(3.0));
  CHECK(shift[0] == 0.0);
  CHECK(shift[1] == 0.0);
  CHECK(shift[2] == doctest::Approx(-5.0));
  CHECK(limit_xi_shift(CaseId::C3_1, 2, 3) == std::array<double, 3>{0, 0, 0});

  const auto signs = admissible_signs(c21, default_eps_ladder());
  const ResonantSolution g = limit_family_member(c21, 1e-6, signs);
  CHECK(g.spec.id == CaseId::Generic);
  CHECK(g.tau.size() == 8);
  // limit_deviation applies the same shifts to an unshifted generic solution.
  const ResonantSolution g0 = make_generic(g.params.k, g.params.p);
  CHECK(limit_deviation(g0, c21, pts) == doctest::Approx(max_deviation(g.tau, c21.tau, pts)).epsilon(1e-12));
  CHECK(limit_deviation(g0, c21, pts) < 1e-4);

  CHECK_THROWS_AS(admissible_signs(make_generic({-1, -2, -4.0 / 3.0}, {0.2, -0.3, 0.1}), default_eps_ladder()),
                  InadmissibleFamily);
  // eps = 0 leaves the resonant pairs at their limits.
  CHECK_THROWS_AS(limit_family_member(c21, 0.0, signs), InadmissibleFamily);
  const std::array<int, 2> wrong = {-signs[0], -signs[1]};
  bool threw = false;
  try {
    limit_family_member(c21, 1e-3, wrong);
  } catch (const InadmissibleFamily&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("limit deviation flags an off-constraint generic solution") {
  const Scenario s = test::figure_scenario("generic-perturbed-c2_1");
  const ResonantSolution g = build_scenario(s);
  const double dev = limit_deviation(g, intent_template(s), random_points(200, 2, limit_box()));
  CHECK(dev > 1e-4);
  CHECK(kp_residual(g.tau, random_points(1000, 1)).max_abs_residual < 1e-8);
}

TEST_CASE("asymptotic match") {
  const ResonantSolution c21 = test::figure("fig2-1");
  const AsymptoticCatalog cat = arm_catalog(c21);
  const MatchReport m = asymptotic_match(c21, cat.stem_future, 20.0);
  CHECK(m.deviation < 1e-3);
  CHECK(m.section.clearance > 0);
  CHECK(asymptotic_match(c21, find(cat, "1", false), -20.0).deviation < 1e-3);

  const ResonantSolution c31 = test::figure("fig3-1");
  const AsymptoticCatalog c = arm_catalog(c31);
  const ArmDescriptor& s1 = find(c, "1", false);
  const double d20 = asymptotic_match(c31, s1, -20.0).deviation;
  CHECK(d20 < 1e-3);
  CHECK(asymptotic_match(c31, s1, -40.0).deviation <= std::max(d20, kMatchFloor));

  // Negative control: S_1's profile on S_2's section.
  const ArmDescriptor& s12 = find(c, "1-2", false);
  CHECK(asymptotic_match(c31, s12, -20.0, s1).deviation > 0.1);

  CHECK_THROWS_AS(asymptotic_match(c21, cat.stem_future, 20.0, std::nullopt, 1e6), AnchorNotFound);
}

TEST_CASE("arm sections stay clear of junctions") {
  const ResonantSolution sol = test::figure("fig2-7");
  const AsymptoticCatalog cat = arm_catalog(sol);
  for (const auto& c : cat.after) {
    const ArmSection s = arm_section(sol, c.arm, 20.0);
    const Line l = normalize(trajectory_line(c.arm, 20.0));
    // Anchor on the arm's line.
    CHECK(std::abs(l.A * s.anchor[0] + l.B * s.anchor[1] + l.C) < 1e-9 * std::max(1.0, std::hypot(s.anchor[0], s.anchor[1])));
    CHECK(s.half_width > 0);
    CHECK(s.clearance >= 15.0);
  }
}

TEST_CASE("ridge trace") {
  const ExpSumTau tau = one_soliton(1.2, 0.5);
  const Line xi0{1.2, 0.5, 0.0};
  const RidgeTrace tr = ridge_trace(tau, 0.0, {1.2, 0.52, 0.05}, {0, 0});
  CHECK(line_distance(tr.fitted_line, xi0) < 1e-6);
  for (const auto& s : tr.samples) CHECK(s.value == doctest::Approx(0.72).epsilon(1e-9));

  const ResonantSolution c31 = test::figure("fig3-1");
  const AsymptoticCatalog cat = arm_catalog(c31);
  const StemReport r = stem_endpoints(c31, cat, 10.0);
  const Line l2 = normalize(trajectory_line(cat.stem_future, 10.0));
  const RidgeTrace t2 = ridge_trace(c31, 10.0, l2, r.midpoint, {3.0, 1.0, 5, 121});
  for (const auto& s : t2.samples) CHECK(std::abs(l2.A * s.ridge[0] + l2.B * s.ridge[1] + l2.C) < 1e-3);
  CHECK(std::abs(t2.samples[t2.samples.size() / 2].value - 8.0 / 9.0) < 1e-3);

  const ResonantSolution c21 = test::figure("fig2-1");
  const AsymptoticCatalog cc = arm_catalog(c21);
  const StemReport rp = stem_endpoints(c21, cc, -20.0);
  const RidgeTrace t1 = ridge_trace(c21, -20.0, trajectory_line(cc.stem_past, -20.0), rp.midpoint, {3.0, 1.0, 3, 121});
  CHECK(std::abs(t1.samples[1].value - 169.0 / 18.0) < 1e-3);

  const ExpSumTau flat({{1.0, 0, 0, 0, 0}});
  CHECK_THROWS_AS(ridge_trace(flat, 0.0, {1, 0, 0}, {0, 0}), RidgeNotFound);
}

TEST_CASE("ridge lines match trajectories for every arm") {
  for (const auto& name : {"fig2-1", "fig2-7", "fig2-9", "fig3-1", "fig3-3"}) {
    CAPTURE(name);
    const ResonantSolution sol = test::figure(name);
    const AsymptoticCatalog cat = arm_catalog(sol);
    for (const auto& c : cat.after) {
      const ArmSection sec = arm_section(sol, c.arm, 20.0);
      const RidgeTrace tr = ridge_trace(sol, 20.0, sec.line, sec.anchor);
      CHECK(line_distance(tr.fitted_line, sec.line) < 1e-4);
    }
  }
}

TEST_CASE("line distance") {
  CHECK(line_distance({1, 0, 2}, {-2, 0, -4}) == 0.0);
  CHECK(line_distance({1, 0, 2}, {1, 0, 2.5}) == doctest::Approx(0.5));
}
