#include "kpii/closed_forms.hpp"

#include <cmath>

namespace kpii {

namespace {

struct Sym {
  double k1, k2, k3, p3, L, t;
};

bool applicable(const ResonantSolution& sol) {
  if (sol.spec.branch != Branch::First) return false;
  for (double v : sol.params.xi0)
    if (v != 0.0) return false;
  return true;
}

Sym sym(const ResonantSolution& sol, double t) {
  const auto& k = sol.params.k;
  return {k[0], k[1], k[2], sol.params.p[2], sol.a12 ? std::log(*sol.a12) : 0.0, t};
}

bool is(const Label& l, int a, int b, int c, bool hat) {
  return l.s[0] == a && l.s[1] == b && l.s[2] == c && l.hat == hat;
}

// l1 ∩ l̂_{2+3} ∩ l̂_{1+2+3}
Vec2 pA1(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  return {(k3 * k3 + 4 * k1 * k2 + 4 * k2 * k3 - 2 * p3 + (4 * k2 * p3 - 4 * p3 * k1) / k3 - 3 * p3 * p3 / (k3 * k3)) * t -
              (k1 * k3 + k3 * k3 + p3) * L / (k3 * (k1 + k2 + k3) * (k2 + k3)),
          L / ((k1 + k2 + k3) * (k2 + k3)) + (6 * p3 / k3 + 4 * k1 - 4 * k2 + 2 * k3) * t};
}

// l2 ∩ l̂_{1+3} ∩ l̂_{1+2+3}
Vec2 pB1(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  return {(k3 * k3 + 4 * k1 * k2 + 4 * k1 * k3 + 2 * p3 - (4 * k1 * p3 - 4 * p3 * k2) / k3 - 3 * p3 * p3 / (k3 * k3)) * t -
              (k2 * k3 + k3 * k3 - p3) * L / (k3 * (k1 + k2 + k3) * (k1 + k3)),
          -L / ((k1 + k2 + k3) * (k1 + k3)) + (6 * p3 / k3 + 4 * k1 - 4 * k2 - 2 * k3) * t};
}

// l3 ∩ l̂1 ∩ l̂_{1+3}
Vec2 pA2(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  return {p3 * L / (k1 * k3 * (k1 + k3)) - ((4 * k1 * k3 * p3 + 3 * p3 * p3) / (k3 * k3) - k3 * k3 + 2 * p3) * t,
          -L / (k1 * (k1 + k3)) + (6 * p3 / k3 + 4 * k1 + 2 * k3) * t};
}

// l3 ∩ l̂2 ∩ l̂_{2+3}
Vec2 pB2(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  return {-p3 * L / (k2 * k3 * (k2 + k3)) + ((4 * k2 * k3 * p3 - 3 * p3 * p3) / (k3 * k3) + k3 * k3 + 2 * p3) * t,
          L / (k2 * (k2 + k3)) + (6 * p3 / k3 - 4 * k2 - 2 * k3) * t};
}

Vec2 pA3(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  (void)k2;
  (void)L;
  return {-((4 * k1 * k3 * p3 + 3 * p3 * p3) / (k3 * k3) - k3 * k3 + 2 * p3) * t, (6 * p3 / k3 + 4 * k1 + 2 * k3) * t};
}

Vec2 pB3(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  return {-(k1 * k3 + p3) * L / (k2 * k3 * (k1 + k2 + k3)) +
              (k3 * k3 + 4 * k1 * k2 + 4 * k1 * k3 + 2 * p3 + (4 * k2 * p3 - 4 * p3 * k1) / k3 - 3 * p3 * p3 / (k3 * k3)) * t,
          L / (k2 * (k1 + k2 + k3)) + (6 * p3 / k3 + 4 * k1 - 4 * k2 - 2 * k3) * t};
}

Vec2 pA5(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  (void)k2;
  (void)L;
  return {(k3 * k3 - 2 * p3 + (4 * k1 * k3 * p3 - 3 * p3 * p3) / (k3 * k3)) * t, (6 * p3 / k3 - 4 * k1 + 2 * k3) * t};
}

Vec2 pB5(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  return {(p3 - k1 * k3) * L / (k2 * k3 * (k1 + k2 - k3)) +
              (k3 * k3 - 4 * k1 * k3 + 4 * k1 * k2 + 2 * p3 + (4 * k1 * p3 - 4 * k2 * p3) / k3 - 3 * p3 * p3 / (k3 * k3)) * t,
          -L / (k2 * (k1 + k2 - k3)) + (6 * p3 / k3 - 4 * k1 + 4 * k2 - 2 * k3) * t};
}

Vec2 pA6(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  (void)k1;
  (void)L;
  return {(k3 * k3 + 2 * p3 - (4 * k2 * k3 * p3 + 3 * p3 * p3) / (k3 * k3)) * t, (6 * p3 / k3 + 4 * k2 - 2 * k3) * t};
}

Vec2 pB6(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  return {-(p3 + k2 * k3) * L / (k1 * k3 * (k1 + k2 - k3)) +
              (k3 * k3 - 4 * k2 * k3 + 4 * k1 * k2 - 2 * p3 + (4 * k1 * p3 - 4 * k2 * p3) / k3 - 3 * p3 * p3 / (k3 * k3)) * t,
          L / (k1 * (k1 + k2 - k3)) + (6 * p3 / k3 - 4 * k1 + 4 * k2 + 2 * k3) * t};
}

Vec2 pA7(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  return {-(k1 * k3 + k2 * k3 + p3) * L / (k1 * k3 * (k2 - k3)) +
              (k3 * k3 - 4 * k1 * k2 - 4 * k2 * k3 - 2 * p3 - 4 * p3 * (k1 + k2) / k3 - 3 * p3 * p3 / (k3 * k3)) * t,
          L / (k1 * (k2 - k3)) + (6 * p3 / k3 + 4 * k1 + 4 * k2 + 2 * k3) * t};
}

Vec2 pB7(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  (void)k1;
  return {p3 * L / (k2 * k3 * (k2 - k3)) + (k3 * k3 + 2 * p3 - 4 * k2 * p3 / k3 - 3 * p3 * p3 / (k3 * k3)) * t,
          -L / (k2 * (k2 - k3)) + (6 * p3 / k3 + 4 * k2 - 2 * k3) * t};
}

Vec2 pA8(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  (void)k2;
  (void)L;
  return {(k3 * k3 - 2 * p3 - 4 * p3 * k1 / k3 - 3 * p3 * p3 / (k3 * k3)) * t, (6 * p3 / k3 + 4 * k1 + 2 * k3) * t};
}

Vec2 pB8(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  (void)L;
  return {(k3 * k3 - 4 * k1 * k2 + 4 * k1 * k3 + 2 * p3 - (4 * k1 * p3 + 4 * p3 * k2) / k3 - 3 * p3 * p3 / (k3 * k3)) * t,
          (6 * p3 / k3 + 4 * k1 + 4 * k2 - 2 * k3) * t};
}

Vec2 pC1(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  (void)k2;
  (void)L;
  return {(k3 * k3 - 2 * p3 + 4 * k1 * p3 / k3 - 3 * p3 * p3 / (k3 * k3)) * t, (6 * p3 / k3 - 4 * k1 + 2 * k3) * t};
}

Vec2 pD1(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  (void)L;
  return {(k3 * k3 - 4 * k1 * k2 - 2 * p3 + (4 * k1 * p3 + 4 * p3 * k2) / k3 - 3 * p3 * p3 / (k3 * k3)) * t,
          (6 * p3 / k3 - 4 * k1 - 4 * k2 + 2 * k3) * t};
}

Vec2 pC2(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  (void)L;
  return {(-3 * k3 * k3 + 4 * k1 * k3 + 4 * k2 * k3 - 4 * k1 * k2 - 6 * p3 + (4 * k1 * p3 + 4 * p3 * k2) / k3 -
           3 * p3 * p3 / (k3 * k3)) * t,
          (6 * p3 / k3 - 4 * k1 - 4 * k2 + 6 * k3) * t};
}

Vec2 pD2(const Sym& s) {
  auto [k1, k2, k3, p3, L, t] = s;
  (void)k1;
  (void)L;
  return {(k3 * k3 - 2 * p3 + 4 * p3 * k2 / k3 - 3 * p3 * p3 / (k3 * k3)) * t, (6 * p3 / k3 - 4 * k2 + 2 * k3) * t};
}

}  // namespace

std::optional<std::pair<Vec2, Vec2>> closed_form_endpoints(const ResonantSolution& sol,
                                                           const Label& stem, double t) {
  if (!applicable(sol)) return std::nullopt;
  const Sym s = sym(sol, t);
  switch (sol.spec.id) {
    case CaseId::C2_1:
      if (is(stem, 1, 1, 1, true)) return std::pair{pA1(s), pB1(s)};
      if (is(stem, 0, 0, 1, false)) return std::pair{pA2(s), pB2(s)};
      break;
    case CaseId::C2_3:
      if (is(stem, 1, 0, 1, false)) return std::pair{pA3(s), pB3(s)};
      if (is(stem, 0, 1, 1, true)) return std::pair{pA1(s), pB2(s)};
      break;
    case CaseId::W2:
      if (is(stem, 1, 0, -1, false)) return std::pair{pA5(s), pB5(s)};
      if (is(stem, 0, 1, -1, false)) return std::pair{pA6(s), pB6(s)};
      break;
    case CaseId::M2:
      if (is(stem, 0, 1, -1, true)) return std::pair{pA7(s), pB7(s)};
      if (is(stem, 1, 0, 1, false)) return std::pair{pA8(s), pB8(s)};
      break;
    case CaseId::C3_1:
      if (is(stem, 1, 0, -1, false)) return std::pair{pC1(s), pD1(s)};
      if (is(stem, 0, 1, 0, false)) return std::pair{pC2(s), pD2(s)};
      break;
    default:
      break;
  }
  return std::nullopt;
}

std::optional<double> closed_form_length(const ResonantSolution& sol, const Label& stem, double t) {
  if (!applicable(sol)) return std::nullopt;
  const auto [k1, k2, k3, p3, L, tt] = sym(sol, t);
  (void)tt;
  switch (sol.spec.id) {
    case CaseId::C2_1:
      if (is(stem, 1, 1, 1, true))
        return std::abs(4 * t + L * (k1 + k2 + 2 * k3) / (k3 * (k1 + k3) * (k2 + k3) * (k1 + k2 + k3))) *
               std::sqrt(k3 * k3 + std::pow(k3 * (k1 - k2) + p3, 2));
      if (is(stem, 0, 0, 1, false))
        return std::sqrt(k3 * k3 + p3 * p3) *
               std::abs(L / (k1 * k3 * (k1 + k3)) + L / (k2 * k3 * (k2 + k3)) - 4 * (k1 + k2 + k3) * t / k3);
      break;
    case CaseId::W2:
      if (is(stem, 1, 0, -1, false))
        return std::sqrt(k1 * k1 * k3 * k3 - 2 * k1 * k3 * p3 + k3 * k3 + p3 * p3) *
               std::abs(L / (k2 * k3 * (k1 + k2 - k3)) - 4 * (k2 - k3) * t / k3);
      if (is(stem, 0, 1, -1, false))
        return std::sqrt(k2 * k2 * k3 * k3 + 2 * k2 * k3 * p3 + k3 * k3 + p3 * p3) *
               std::abs(L / (k1 * k3 * (k1 + k2 - k3)) - 4 * (k1 - k3) * t / k3);
      break;
    case CaseId::M2:
      if (is(stem, 0, 1, -1, true))
        return std::sqrt(k3 * k3 + std::pow(k2 * k3 + p3, 2)) *
               std::abs((k1 + k2) * L / (k1 * k2 * k3 * (k2 - k3)) + 4 * (k1 + k3) * t / k3);
      if (is(stem, 1, 0, 1, false))
        return 4 * std::abs(t * (k2 - k3)) * std::sqrt(k3 * k3 + std::pow(k1 * k3 + p3, 2)) / std::abs(k3);
      break;
    case CaseId::C3_1:
      if (is(stem, 1, 0, -1, false))
        return 4 * std::abs(k2 * t) * std::sqrt(k1 * k1 + 1 - 2 * k1 * p3 / k3 + p3 * p3 / (k3 * k3));
      if (is(stem, 0, 1, 0, false))
        return 4 * std::abs(t * (k1 - k3)) *
               std::sqrt((k2 - k3) * (k2 - k3) + 2 * p3 + 1 - 2 * k2 * p3 / k3 + p3 * p3 / (k3 * k3));
      break;
    default:
      break;
  }
  return std::nullopt;
}

}  // namespace kpii
