#pragma once

#include <optional>
#include <vector>

#include "kpii/geometry.hpp"

namespace kpii {

// Piece of the tie line between two template terms on which that pair
// dominates every other term.
struct TropicalEdge {
  int a = 0;
  int b = 0;
  Label label;
  double offset = 0.0;
  Vec2 origin{};
  Vec2 dir{};  // unit, along increasing parameter
  double lo = 0.0;
  double hi = 0.0;  // parameter range, may be infinite
  bool bounded() const;
  Vec2 at(double s) const { return {origin[0] + s * dir[0], origin[1] + s * dir[1]}; }
};

// Exponent data of the template terms.
struct TropTerm {
  double K, P, W, c;
  std::array<int, 3> idx;
  bool hat;
};

std::vector<TropTerm> trop_terms(const ResonantSolution& sol);
std::vector<TropicalEdge> tropical_edges(const std::vector<TropTerm>& terms, double t);

struct JunctionArm {
  TropicalEdge edge;
  Vec2 outward{};
};

struct StemTopology {
  TropicalEdge stem;
  std::array<std::vector<JunctionArm>, 2> junctions;  // at stem.lo and stem.hi
};

// Stem and adjacent arms at large |t| with the sign of t_sign.
StemTopology stem_topology(const ResonantSolution& sol, double t_sign);

// Smallest margin by which the pair (a, b) dominates all other terms at x.
double dominance_gap(const std::vector<TropTerm>& terms, int a, int b, const Vec2& x, double t);

}  // namespace kpii
