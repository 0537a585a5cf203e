#include "kpii/tropical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kpii {

bool TropicalEdge::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

std::vector<TropTerm> trop_terms(const ResonantSolution& sol) {
  std::vector<TropTerm> out;
  for (const auto& l : sol.layout) {
    const double coeff = l.hat ? sol.a12.value_or(1.0) * l.coeff : l.coeff;
    if (coeff <= 0.0) continue;
    TropTerm t{0, 0, 0, std::log(coeff), l.idx, l.hat};
    for (int j = 0; j < 3; ++j) {
      t.K += l.idx[j] * sol.params.k[j];
      t.P += l.idx[j] * sol.params.p[j];
      t.W += l.idx[j] * sol.omega[j];
      t.c += l.idx[j] * sol.params.xi0[j];
    }
    out.push_back(t);
  }
  return out;
}

std::vector<TropicalEdge> tropical_edges(const std::vector<TropTerm>& terms, double t) {
  std::vector<TropicalEdge> out;
  const int n = static_cast<int>(terms.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const TropTerm& ta = terms[a];
      const TropTerm& tb = terms[b];
      const double A = ta.K - tb.K, B = ta.P - tb.P;
      const double C = (ta.W - tb.W) * t + ta.c - tb.c;
      const double nn = std::hypot(A, B);
      if (nn < 1e-14) continue;
      TropicalEdge e;
      e.a = a;
      e.b = b;
      e.origin = {-A * C / (nn * nn), -B * C / (nn * nn)};
      e.dir = {-B / nn, A / nn};
      e.lo = -INFINITY;
      e.hi = INFINITY;
      bool empty = false;
      for (int q = 0; q < n && !empty; ++q) {
        if (q == a || q == b) continue;
        const TropTerm& tq = terms[q];
        const double g0 = (ta.K - tq.K) * e.origin[0] + (ta.P - tq.P) * e.origin[1] +
                          (ta.W - tq.W) * t + ta.c - tq.c;
        const double g1 = (ta.K - tq.K) * e.dir[0] + (ta.P - tq.P) * e.dir[1];
        if (std::abs(g1) < 1e-14) {
          if (g0 < 0) empty = true;
          continue;
        }
        const double r = -g0 / g1;
        if (g1 > 0)
          e.lo = std::max(e.lo, r);
        else
          e.hi = std::min(e.hi, r);
      }
      if (empty || !(e.hi - e.lo > 1e-9 * (1.0 + std::abs(t)))) continue;
      for (int j = 0; j < 3; ++j) e.label.s[j] = ta.idx[j] - tb.idx[j];
      e.label.hat = ta.hat != tb.hat;
      e.offset = (ta.hat ? 1.0 : 0.0) - (tb.hat ? 1.0 : 0.0);
      const int first = *std::find_if(e.label.s.begin(), e.label.s.end(), [](int v) { return v != 0; });
      if (first < 0) {
        for (int& v : e.label.s) v = -v;
        e.offset = -e.offset;
        e.dir = {-e.dir[0], -e.dir[1]};
        std::swap(e.lo, e.hi);
        e.lo = -e.lo;
        e.hi = -e.hi;
      }
      out.push_back(e);
    }
  }
  return out;
}

double dominance_gap(const std::vector<TropTerm>& terms, int a, int b, const Vec2& x, double t) {
  auto phi = [&](const TropTerm& q) { return q.K * x[0] + q.P * x[1] + q.W * t + q.c; };
  const double m = std::max(phi(terms[a]), phi(terms[b]));
  double gap = INFINITY;
  for (int q = 0; q < static_cast<int>(terms.size()); ++q)
    if (q != a && q != b) gap = std::min(gap, m - phi(terms[q]));
  return gap;
}

namespace {

struct Graph {
  std::vector<TropicalEdge> edges;
  std::vector<int> v0, v1;  // vertex ids, -1 for rays
  std::vector<bool> shortish;
  std::vector<int> parent;

  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
};

}  // namespace

StemTopology stem_topology(const ResonantSolution& sol, double t_sign) {
  const std::vector<TropTerm> terms = trop_terms(sol);
  const double T = (t_sign < 0 ? -1.0 : 1.0) * 1e4;
  Graph g;
  g.edges = tropical_edges(terms, T);
  const std::vector<TropicalEdge> later = tropical_edges(terms, 2 * T);

  double scale = 1.0;
  for (const auto& e : g.edges) {
    if (std::isfinite(e.lo)) scale = std::max({scale, std::abs(e.at(e.lo)[0]), std::abs(e.at(e.lo)[1])});
    if (std::isfinite(e.hi)) scale = std::max({scale, std::abs(e.at(e.hi)[0]), std::abs(e.at(e.hi)[1])});
  }
  const double tol = 1e-9 * scale;
  std::vector<Vec2> verts;
  auto vid = [&](const Vec2& p) {
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (std::hypot(p[0] - verts[i][0], p[1] - verts[i][1]) < tol) return static_cast<int>(i);
    verts.push_back(p);
    return static_cast<int>(verts.size() - 1);
  };
  for (const auto& e : g.edges) {
    g.v0.push_back(std::isfinite(e.lo) ? vid(e.at(e.lo)) : -1);
    g.v1.push_back(std::isfinite(e.hi) ? vid(e.at(e.hi)) : -1);
    bool s = false;
    if (e.bounded()) {
      for (const auto& l : later)
        if (l.a == e.a && l.b == e.b && l.bounded())
          s = std::abs((l.hi - l.lo) - (e.hi - e.lo)) < 1e-6 * std::abs(T);
    }
    g.shortish.push_back(s);
  }
  g.parent.resize(verts.size());
  std::iota(g.parent.begin(), g.parent.end(), 0);
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.shortish[i]) g.parent[g.find(g.v0[i])] = g.find(g.v1[i]);
  std::vector<int> degree(verts.size(), 0);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (g.shortish[i]) continue;
    if (g.v0[i] >= 0) ++degree[g.find(g.v0[i])];
    if (g.v1[i] >= 0) ++degree[g.find(g.v1[i])];
  }

  std::vector<std::size_t> stems;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (g.shortish[i] || !g.edges[i].bounded()) continue;
    const int c0 = g.find(g.v0[i]), c1 = g.find(g.v1[i]);
    if (c0 != c1 && degree[c0] == 3 && degree[c1] == 3) stems.push_back(i);
  }
  if (stems.size() != 1) throw GeometryError("dominant balance does not give a unique stem");

  StemTopology topo;
  const std::size_t si = stems[0];
  topo.stem = g.edges[si];
  const int ends[2] = {g.find(g.v0[si]), g.find(g.v1[si])};
  for (int k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      if (i == si || g.shortish[i]) continue;
      const TropicalEdge& e = g.edges[i];
      if (g.v0[i] >= 0 && g.find(g.v0[i]) == ends[k])
        topo.junctions[k].push_back({e, e.dir});
      else if (g.v1[i] >= 0 && g.find(g.v1[i]) == ends[k])
        topo.junctions[k].push_back({e, {-e.dir[0], -e.dir[1]}});
    }
    if (topo.junctions[k].size() != 2) throw GeometryError("stem junction is not a Y vertex");
  }
  return topo;
}

}  // namespace kpii
