#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kpii/geometry.hpp"

namespace kpii {

struct AnchorNotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RidgeNotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InadmissibleFamily : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Box {
  double xmin = -50, xmax = 50;
  double ymin = -50, ymax = 50;
  double tmin = -10, tmax = 10;
};

// Deterministic uniform draws in the box.
std::vector<Point> random_points(std::size_t n, std::uint64_t seed, const Box& box = {});

struct ResidualReport {
  double max_abs_residual = 0.0;
  std::size_t n_points = 0;
  std::vector<std::array<double, 4>> points_exceeding_tol;  // x, y, t, R
};

ResidualReport kp_residual(const ExpSumTau& tau, const std::vector<Point>& points, double tol = 1e-8);

// Limit families: a generic solution whose p1, p2 sit eps away from the
// case constraints, with the case's phase shifts folded into xi0.
struct LimitRung {
  double eps = 0.0;
  std::array<double, 3> a{};  // a12, a13, a23
  double deviation = 0.0;
};
struct LimitStudy {
  std::vector<LimitRung> rungs;
  bool monotone_tail = false;  // over the final three rungs
  double final_deviation = 0.0;
};

std::vector<double> default_eps_ladder();
// The limits are pointwise, not uniform: ghost terms carrying 1/a_ij still
// dominate far out. Limit studies sample a window around the interaction.
Box limit_box();
ResonantSolution limit_family_member(const ResonantSolution& templ, double eps, std::array<int, 2> signs);
// Sign pattern keeping every a_ij positive over the ladder.
std::array<int, 2> admissible_signs(const ResonantSolution& templ, const std::vector<double>& ladder);
double max_deviation(const ExpSumTau& a, const ExpSumTau& b, const std::vector<Point>& points);
LimitStudy limit_convergence(const ResonantSolution& templ, const std::vector<Point>& points,
                             const std::vector<double>& ladder = default_eps_ladder());
// Template against an arbitrary generic solution, shifts applied.
double limit_deviation(const ResonantSolution& generic, const ResonantSolution& templ,
                       const std::vector<Point>& points);
std::array<double, 3> limit_xi_shift(CaseId id, double a13, double a23);

struct ArmSection {
  Vec2 anchor{};
  Line line;  // the arm trajectory
  double half_width = 0.0;  // along the perpendicular, in length units
  double clearance = 0.0;   // smallest dominance margin of other terms on the section
};

// Section through the arm far from all junctions at time t.
ArmSection arm_section(const ResonantSolution& sol, const ArmDescriptor& arm, double t,
                       double junction_distance = 10.0, double phase_half_width = 20.0);

// Deviations at or below this are rounding: exponents reach 10^3 on
// junction-distant sections.
inline constexpr double kMatchFloor = 1e-11;

struct MatchReport {
  double deviation = 0.0;
  ArmSection section;
};

// Sup-norm of u minus the profile of `profile` (default: the arm itself) on
// the arm's junction-distant perpendicular section.
MatchReport asymptotic_match(const ResonantSolution& sol, const ArmDescriptor& arm, double t,
                             const std::optional<ArmDescriptor>& profile = std::nullopt,
                             double junction_distance = 10.0, int n = 801);

struct RidgeSample {
  Vec2 anchor{};
  Vec2 ridge{};
  double value = 0.0;
};
struct RidgeTrace {
  std::vector<RidgeSample> samples;
  Line fitted_line;
};
struct RidgeOptions {
  double half_window = 3.0;  // perpendicular scan half-width
  double span = 5.0;         // scan anchors spread along the line
  int n_scans = 11;
  int n_samples = 121;
};

RidgeTrace ridge_trace(const ResonantSolution& sol, double t, const Line& approx_line,
                       const Vec2& center, const RidgeOptions& opt = {});
RidgeTrace ridge_trace(const ExpSumTau& tau, double t, const Line& approx_line, const Vec2& center,
                       const RidgeOptions& opt = {});

// Largest componentwise gap between two normalized lines.
double line_distance(const Line& a, const Line& b);

}  // namespace kpii
