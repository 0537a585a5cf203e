#include "kpii/cases.hpp"

#include <cmath>

namespace kpii {

namespace {

constexpr double kZeroTol = 1e-12;

void require_nonzero(double v, const char* what) {
  if (v == 0.0 || !std::isfinite(v)) throw DegenerateParameter(std::string(what) + " must be finite and nonzero");
}

double safe_div(double num, double den, const char* what) {
  if (den == 0.0) throw DegenerateParameter(std::string("zero denominator in ") + what);
  return num / den;
}

// The four constraint shapes that recur across the cases.
double strong_plus(double k, double k3, double p3) { return k * (k * k3 + k3 * k3 + p3) / k3; }
double strong_minus(double k, double k3, double p3) { return -k * (k * k3 + k3 * k3 - p3) / k3; }
double weak_plus(double k, double k3, double p3) { return k * (k * k3 - k3 * k3 + p3) / k3; }
double weak_minus(double k, double k3, double p3) { return -k * (k * k3 - k3 * k3 - p3) / k3; }

TemplateTerm tt(int a, int b, int c, bool hat = false) { return {{a, b, c}, 1.0, hat}; }

}  // namespace

std::string case_name(CaseId c) {
  switch (c) {
    case CaseId::C2_1: return "c2_1";
    case CaseId::C2_2: return "c2_2";
    case CaseId::C2_3: return "c2_3";
    case CaseId::C2_4: return "c2_4";
    case CaseId::W2: return "w2";
    case CaseId::M2: return "m2";
    case CaseId::C3_1: return "c3_1";
    case CaseId::C3_2: return "c3_2";
    case CaseId::Generic: return "generic";
  }
  return "?";
}

std::optional<CaseId> parse_case(const std::string& s) {
  for (CaseId c : {CaseId::C2_1, CaseId::C2_2, CaseId::C2_3, CaseId::C2_4, CaseId::W2, CaseId::M2,
                   CaseId::C3_1, CaseId::C3_2, CaseId::Generic})
    if (case_name(c) == s) return c;
  return std::nullopt;
}

std::string branch_name(Branch b) { return b == Branch::First ? "first" : "second"; }

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::Elastic: return "ELASTIC";
    case Kind::Strong: return "STRONG";
    case Kind::Weak: return "WEAK";
    case Kind::Mixed: return "MIXED";
  }
  return "?";
}

double omega(double k, double p) {
  require_nonzero(k, "k");
  return -(k * k * k * k + 3.0 * p * p) / k;
}

PhaseShift phase_shift_param(double ki, double pi, double kj, double pj) {
  require_nonzero(ki, "k_i");
  require_nonzero(kj, "k_j");
  const double kk = ki * ki * kj * kj;
  const double d = kj * pi - ki * pj;
  const double a = kk * (ki - kj) * (ki - kj);
  const double b = kk * (ki + kj) * (ki + kj);
  const double num = a - d * d;
  const double den = b - d * d;
  const bool num_zero = std::abs(num) <= kZeroTol * (a + d * d);
  const bool den_zero = std::abs(den) <= kZeroTol * (b + d * d);
  if (num_zero && den_zero) throw IndeterminateResonance("a_ij numerator and denominator both vanish");
  if (den_zero) return {true, 0.0};
  if (num_zero) return {false, 0.0};
  const double v = num / den;
  if (v < 0) throw InadmissibleParameter("a_ij < 0 violates a_ij >= 0");
  return {false, v};
}

std::optional<double> case_a12(const SolitonParams& params, CaseId id) {
  const auto& k = params.k;
  switch (id) {
    case CaseId::C2_1:
    case CaseId::C2_2:
    case CaseId::C2_3:
    case CaseId::C2_4:
      return safe_div((k[0] + k[2]) * (k[1] + k[2]), k[2] * (k[0] + k[1] + k[2]), "a12");
    case CaseId::W2:
      return safe_div(-(k[0] - k[2]) * (k[1] - k[2]), k[2] * (k[0] + k[1] - k[2]), "a12");
    case CaseId::M2:
      return safe_div(-k[2] * (k[0] - k[1] + k[2]), (k[0] + k[2]) * (k[1] - k[2]), "a12");
    default:
      return std::nullopt;
  }
}

SolitonParams resolve_constraints(const std::array<double, 3>& k, double p3,
                                  const std::array<double, 3>& xi0, const CaseSpec& spec) {
  if (spec.id == CaseId::Generic)
    throw std::invalid_argument("generic case takes explicit p; use make_generic");
  for (int j = 0; j < 3; ++j) require_nonzero(k[j], ("k[" + std::to_string(j) + "]").c_str());
  if (!std::isfinite(p3)) throw DegenerateParameter("p3 must be finite");
  for (double v : xi0)
    if (!std::isfinite(v)) throw DegenerateParameter("xi0 must be finite");
  const double k3 = k[2];
  using Fn = double (*)(double, double, double);
  Fn f1 = nullptr, f2 = nullptr;
  const bool first = spec.branch == Branch::First;
  switch (spec.id) {
    case CaseId::C2_1:
    case CaseId::C2_2:
    case CaseId::C2_3:
    case CaseId::C2_4:
      f1 = first ? strong_plus : strong_minus;
      f2 = first ? strong_minus : strong_plus;
      break;
    case CaseId::W2:
      f1 = first ? weak_minus : weak_plus;
      f2 = first ? weak_plus : weak_minus;
      break;
    case CaseId::M2:
      f1 = first ? strong_plus : strong_minus;
      f2 = first ? weak_plus : weak_minus;
      break;
    case CaseId::C3_1:
      f1 = f2 = first ? weak_minus : weak_plus;
      break;
    case CaseId::C3_2:
      f1 = f2 = first ? strong_minus : strong_plus;
      break;
    case CaseId::Generic:
      break;
  }
  SolitonParams out;
  out.k = k;
  out.xi0 = xi0;
  out.p = {f1(k[0], k3, p3), f2(k[1], k3, p3), p3};
  if (auto a12 = case_a12(out, spec.id)) {
    if (!std::isfinite(*a12)) throw DegenerateParameter("a12 is not finite");
    if (*a12 <= 0.0) {
      std::string rule = "0 < a12 < inf";
      if (spec.id == CaseId::W2) rule = "k3(k1-k3)(k2-k3)(k1+k2-k3) < 0";
      throw InadmissibleParameter("a12 = " + std::to_string(*a12) + " violates " + rule);
    }
  }
  return out;
}

std::vector<TemplateTerm> case_layout(CaseId id) {
  switch (id) {
    case CaseId::C2_1: return {tt(0, 0, 0), tt(1, 0, 0), tt(0, 1, 0), tt(1, 1, 0, true), tt(1, 1, 1, true)};
    case CaseId::C2_2: return {tt(0, 0, 0), tt(0, 1, 0), tt(0, 1, 1), tt(1, 1, 1, true)};
    case CaseId::C2_3: return {tt(0, 0, 0), tt(1, 0, 0), tt(1, 0, 1), tt(1, 1, 1, true)};
    case CaseId::C2_4: return {tt(0, 0, 0), tt(0, 0, 1), tt(1, 0, 1), tt(0, 1, 1), tt(1, 1, 1, true)};
    case CaseId::W2: return {tt(0, 0, 0), tt(1, 0, 0), tt(0, 1, 0), tt(0, 0, 1), tt(1, 1, 0, true)};
    case CaseId::M2: return {tt(0, 0, 0), tt(1, 0, 0), tt(0, 1, 0), tt(1, 1, 0, true), tt(1, 0, 1)};
    case CaseId::C3_1: return {tt(0, 0, 0), tt(1, 0, 0), tt(0, 1, 0), tt(0, 0, 1)};
    case CaseId::C3_2: return {tt(0, 0, 0), tt(0, 0, 1), tt(1, 0, 1), tt(0, 1, 1)};
    case CaseId::Generic: break;
  }
  return {tt(0, 0, 0), tt(1, 0, 0), tt(0, 1, 0), tt(0, 0, 1),
          tt(1, 1, 0), tt(1, 0, 1), tt(0, 1, 1), tt(1, 1, 1)};
}

ExpSumTau tau_from_layout(const SolitonParams& params, const std::vector<TemplateTerm>& layout,
                          double a12) {
  std::array<double, 3> w;
  for (int j = 0; j < 3; ++j) w[j] = omega(params.k[j], params.p[j]);
  std::vector<ExpTerm> terms;
  for (const auto& l : layout) {
    ExpTerm t;
    t.coeff = l.hat ? a12 * l.coeff : l.coeff;
    for (int j = 0; j < 3; ++j) {
      t.kx += l.idx[j] * params.k[j];
      t.py += l.idx[j] * params.p[j];
      t.wt += l.idx[j] * w[j];
      t.phase += l.idx[j] * params.xi0[j];
    }
    terms.push_back(t);
  }
  return ExpSumTau(std::move(terms));
}

ResonanceClass classify_resonance(const SolitonParams& params, const CaseSpec& spec) {
  ResonanceClass rc;
  switch (spec.id) {
    case CaseId::C2_1:
    case CaseId::C2_2:
    case CaseId::C2_3:
    case CaseId::C2_4:
      rc.k13 = rc.k23 = Kind::Strong;
      break;
    case CaseId::W2:
      rc.k13 = rc.k23 = Kind::Weak;
      break;
    case CaseId::M2:
      rc.k13 = Kind::Strong;
      rc.k23 = Kind::Weak;
      break;
    case CaseId::C3_1:
      rc.k12 = rc.k13 = rc.k23 = Kind::Weak;
      break;
    case CaseId::C3_2:
      rc.k12 = Kind::Weak;
      rc.k13 = rc.k23 = Kind::Strong;
      break;
    case CaseId::Generic: {
      auto a = phase_shift_param(params.k[0], params.p[0], params.k[1], params.p[1]);
      if (!a.infinite && a.value > 0) rc.a12 = a.value;
      return rc;
    }
  }
  rc.a12 = case_a12(params, spec.id);
  return rc;
}

ResonantSolution build_solution(const SolitonParams& params, const CaseSpec& spec) {
  if (spec.id == CaseId::Generic) return make_generic(params.k, params.p, params.xi0);
  std::optional<double> a12 = case_a12(params, spec.id);
  if (a12 && !(*a12 > 0.0 && std::isfinite(*a12)))
    throw InadmissibleParameter("a12 must satisfy 0 < a12 < inf");
  std::vector<TemplateTerm> layout = case_layout(spec.id);
  ExpSumTau tau = tau_from_layout(params, layout, a12.value_or(1.0));
  ResonantSolution sol{params, spec, {}, a12, layout, std::move(tau), classify_resonance(params, spec)};
  for (int j = 0; j < 3; ++j) sol.omega[j] = omega(params.k[j], params.p[j]);
  return sol;
}

ResonantSolution make_generic(const std::array<double, 3>& k, const std::array<double, 3>& p,
                              const std::array<double, 3>& xi0) {
  for (int j = 0; j < 3; ++j) require_nonzero(k[j], ("k[" + std::to_string(j) + "]").c_str());
  for (int j = 0; j < 3; ++j)
    if (!std::isfinite(p[j]) || !std::isfinite(xi0[j])) throw DegenerateParameter("p and xi0 must be finite");
  auto finite = [](PhaseShift a) {
    if (a.infinite) throw InadmissibleParameter("generic solution needs finite a_ij");
    return a.value;
  };
  const double a12 = finite(phase_shift_param(k[0], p[0], k[1], p[1]));
  const double a13 = finite(phase_shift_param(k[0], p[0], k[2], p[2]));
  const double a23 = finite(phase_shift_param(k[1], p[1], k[2], p[2]));
  std::vector<TemplateTerm> layout = case_layout(CaseId::Generic);
  layout[4].coeff = a12;
  layout[5].coeff = a13;
  layout[6].coeff = a23;
  layout[7].coeff = a12 * a13 * a23;
  SolitonParams params{k, p, xi0};
  ExpSumTau tau = tau_from_layout(params, layout, 1.0);
  CaseSpec spec{CaseId::Generic, Branch::First};
  ResonantSolution sol{params, spec, {}, std::nullopt, layout, std::move(tau), {}};
  sol.resonance = classify_resonance(params, spec);
  for (int j = 0; j < 3; ++j) sol.omega[j] = omega(k[j], p[j]);
  return sol;
}

}  // namespace kpii
