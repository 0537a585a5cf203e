#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kpii/tau.hpp"

namespace kpii {

struct DegenerateParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InadmissibleParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IndeterminateResonance : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class CaseId { C2_1, C2_2, C2_3, C2_4, W2, M2, C3_1, C3_2, Generic };
enum class Branch { First, Second };

std::string case_name(CaseId c);  // "c2_1", ..., "generic"
std::optional<CaseId> parse_case(const std::string& s);
std::string branch_name(Branch b);

struct CaseSpec {
  CaseId id = CaseId::C2_1;
  Branch branch = Branch::First;
};

struct SolitonParams {
  std::array<double, 3> k{};
  std::array<double, 3> p{};  // p[0], p[1] derived for resonant cases
  std::array<double, 3> xi0{};
};

struct PhaseShift {
  bool infinite = false;
  double value = 0.0;  // meaningful when !infinite
};

enum class Kind { Elastic, Strong, Weak, Mixed };
std::string kind_name(Kind k);

struct ResonanceClass {
  Kind k12 = Kind::Elastic;
  Kind k13 = Kind::Elastic;
  Kind k23 = Kind::Elastic;
  std::optional<double> a12;
};

// One template term: coefficient a12^hat * (generic extras) times exp of
// the sum of xi_j over idx.
struct TemplateTerm {
  std::array<int, 3> idx{};
  double coeff = 1.0;
  bool hat = false;  // coefficient carries a12
};

struct ResonantSolution {
  SolitonParams params;
  CaseSpec spec;
  std::array<double, 3> omega{};
  std::optional<double> a12;
  std::vector<TemplateTerm> layout;
  ExpSumTau tau;
  ResonanceClass resonance;
};

double omega(double k, double p);
PhaseShift phase_shift_param(double ki, double pi, double kj, double pj);

// Fills p1, p2 for the case and branch and checks a12 admissibility.
SolitonParams resolve_constraints(const std::array<double, 3>& k, double p3,
                                  const std::array<double, 3>& xi0, const CaseSpec& spec);
// The surviving a12 of a two-resonant case, from its closed form.
std::optional<double> case_a12(const SolitonParams& params, CaseId id);

ResonantSolution build_solution(const SolitonParams& params, const CaseSpec& spec);
ResonantSolution make_generic(const std::array<double, 3>& k, const std::array<double, 3>& p,
                              const std::array<double, 3>& xi0 = {0, 0, 0});
ResonanceClass classify_resonance(const SolitonParams& params, const CaseSpec& spec);

// Builds an ExpSumTau from a term layout.
ExpSumTau tau_from_layout(const SolitonParams& params, const std::vector<TemplateTerm>& layout,
                          double a12);

std::vector<TemplateTerm> case_layout(CaseId id);

}  // namespace kpii
