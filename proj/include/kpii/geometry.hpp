#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kpii/cases.hpp"

namespace kpii {

using Vec2 = std::array<double, 2>;

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedFormula : std::logic_error {
  using std::logic_error::logic_error;
};

// Signed index combination of the phases, e.g. {1,0,-1} is 1-3.
struct Label {
  std::array<int, 3> s{};
  bool hat = false;
  bool operator==(const Label&) const = default;
};
std::string label_name(const Label& l);  // "1+2-3", hat appends "^"
std::optional<Label> parse_label(const std::string& text);

// A x + B y + C = 0.
struct Line {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};
Line normalize(const Line& l);

struct Velocity {
  std::optional<double> vx;
  std::optional<double> vy;
};

struct ArmDescriptor {
  Label label;
  double K = 0.0;  // signed k sum
  double P = 0.0;  // signed p sum
  double W = 0.0;  // signed omega sum
  double c0 = 0.0;  // signed xi0 sum plus profile offset
  double amplitude = 0.0;
  double profile_offset = 0.0;
  Velocity velocity;

  Line raw_line(double t) const { return {K, P, W * t + c0}; }
};

ArmDescriptor make_arm(const ResonantSolution& sol, const Label& label, double offset);

enum class Region { YMinus, YPlus, XMinus, XPlus };
std::string region_name(Region r);

struct CatalogArm {
  Region region;
  ArmDescriptor arm;
};

struct AsymptoticCatalog {
  std::vector<CatalogArm> before;
  std::vector<CatalogArm> after;
  ArmDescriptor stem_past;
  ArmDescriptor stem_future;
  // Arms meeting each stem end, index [end][0..1].
  std::array<std::array<ArmDescriptor, 2>, 2> past_junctions;
  std::array<std::array<ArmDescriptor, 2>, 2> future_junctions;
  char axis = 'y';
  bool alternate_regime = false;
  bool regime_heuristic = false;
};

struct StemReport {
  double t = 0.0;
  Label stem;
  Vec2 endpoint_a{};
  Vec2 endpoint_b{};
  double length = 0.0;
  Vec2 midpoint{};
  double midpoint_amplitude = 0.0;
  bool valid = false;
  bool closed_form_checked = false;
};

struct VelocityRow {
  Label label;
  Velocity velocity;
  double amplitude = 0.0;
};

AsymptoticCatalog arm_catalog(const ResonantSolution& sol);
double arm_profile(const ArmDescriptor& arm, double x, double y, double t);
Line trajectory_line(const ArmDescriptor& arm, double t);
std::optional<Vec2> intersect_lines(const Line& l1, const Line& l2);

StemReport stem_endpoints(const ResonantSolution& sol, double t, double t_min = 3.0);
StemReport stem_endpoints(const ResonantSolution& sol, const AsymptoticCatalog& cat, double t,
                          double t_min = 3.0);
// Stem endpoints by trajectory intersection only.
std::pair<Vec2, Vec2> geometric_endpoints(const AsymptoticCatalog& cat, double t);
double stem_length_formula(const ResonantSolution& sol, double t);
double stem_length_formula(const ResonantSolution& sol, const AsymptoticCatalog& cat, double t);
double midpoint_amplitude(const ResonantSolution& sol, double t);

// Samples u along a line parametrised by arclength s from the point of the
// line closest to the anchor.
std::vector<std::pair<double, double>> cross_section(const ResonantSolution& sol, const Line& line,
                                                     const Vec2& anchor, double s0, double s1,
                                                     int n, double t);
Vec2 section_point(const Line& line, const Vec2& anchor, double s);
// Sampled maximum refined by golden section to 1e-6 in arclength.
std::pair<double, double> section_max(const ResonantSolution& sol, const Line& line,
                                      const Vec2& anchor, double s0, double s1, int n, double t);
struct SectionExtremum {
  double s = 0.0;  // arclength from the stem midpoint
  double u = 0.0;
  bool maximum = true;
};
// Stationary point of u along the stem line nearest its midpoint, searched
// over the central 70% of the stem.
SectionExtremum stem_section_extremum(const ResonantSolution& sol, double t);
Line perpendicular_through(const Line& line, const Vec2& point);

Velocity table1_velocity(const Label& label, const SolitonParams& params);
std::vector<VelocityRow> velocity_table(const ResonantSolution& sol);

// Golden-section maximisation of f on [a, b].
template <class F>
double golden_max(F&& f, double a, double b, double tol = 1e-6) {
  const double g = 0.6180339887498949;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace kpii
