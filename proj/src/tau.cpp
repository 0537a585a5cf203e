#include "kpii/tau.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace kpii {

namespace {

bool finite_point(const Point& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.t);
}

void require_finite(const Point& p) {
  if (!finite_point(p)) throw DomainError("non-finite evaluation point");
}

// Normalised term weights w_m = exp(e_m - max e) at a point.
struct Weights {
  std::vector<double> w;
  double sum = 0.0;
  double shift = 0.0;
};

Weights weights(const ExpSumTau& tau, const Point& p) {
  Weights out;
  const std::size_t n = tau.size();
  out.w.resize(n);
  double m = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    out.w[i] = tau.exponent(i, p);
    m = std::max(m, out.w[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.w[i] = std::exp(out.w[i] - m);
    out.sum += out.w[i];
  }
  out.shift = m;
  return out;
}

// Set partitions of {0..n-1} without singleton blocks, as block lists.
using Partition = std::vector<std::vector<int>>;

const std::vector<Partition>& partitions(int n) {
  static std::vector<std::vector<Partition>> cache = [] {
    std::vector<std::vector<Partition>> all(7);
    for (int len = 0; len <= 6; ++len) {
      std::vector<int> rgs(len, 0);
      std::function<void(int, int)> rec = [&](int pos, int nblocks) {
        if (pos == len) {
          Partition part(nblocks);
          for (int i = 0; i < len; ++i) part[rgs[i]].push_back(i);
          for (const auto& b : part)
            if (b.size() < 2) return;
          all[len].push_back(part);
          return;
        }
        for (int b = 0; b <= nblocks; ++b) {
          rgs[pos] = b;
          rec(pos + 1, std::max(nblocks, b + 1));
        }
      };
      rec(0, 0);
    }
    return all;
  }();
  return cache.at(n);
}

// Joint cumulants of the exponent-slope vector under the term weights.
// Derivatives of ln f are exactly these cumulants.
class Cumulants {
 public:
  Cumulants(const ExpSumTau& tau, const Weights& w) : w_(w) {
    const auto& terms = tau.terms();
    const std::size_t n = terms.size();
    double mean[3] = {0, 0, 0};
    for (std::size_t m = 0; m < n; ++m) {
      mean[0] += w.w[m] * terms[m].kx;
      mean[1] += w.w[m] * terms[m].py;
      mean[2] += w.w[m] * terms[m].wt;
    }
    for (double& v : mean) v /= w.sum;
    dev_.resize(n);
    for (std::size_t m = 0; m < n; ++m)
      dev_[m] = {terms[m].kx - mean[0], terms[m].py - mean[1], terms[m].wt - mean[2]};
  }

  // Cumulant of order (a, b, c) in (x, y, t).
  double operator()(int a, int b, int c) {
    std::vector<int> vars;
    vars.insert(vars.end(), a, 0);
    vars.insert(vars.end(), b, 1);
    vars.insert(vars.end(), c, 2);
    double total = 0.0;
    for (const auto& part : partitions(static_cast<int>(vars.size()))) {
      const int nb = static_cast<int>(part.size());
      double term = (nb % 2 == 1 ? 1.0 : -1.0) * std::tgamma(nb);
      for (const auto& block : part) {
        int o[3] = {0, 0, 0};
        for (int i : block) ++o[vars[i]];
        term *= moment(o[0], o[1], o[2]);
      }
      total += term;
    }
    return total;
  }

 private:
  double moment(int a, int b, int c) {
    const int key = a * 100 + b * 10 + c;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    double s = 0.0;
    for (std::size_t m = 0; m < dev_.size(); ++m) {
      double v = w_.w[m];
      for (int i = 0; i < a; ++i) v *= dev_[m][0];
      for (int i = 0; i < b; ++i) v *= dev_[m][1];
      for (int i = 0; i < c; ++i) v *= dev_[m][2];
      s += v;
    }
    s /= w_.sum;
    memo_[key] = s;
    return s;
  }

  const Weights& w_;
  std::vector<std::array<double, 3>> dev_;
  std::map<int, double> memo_;
};

void check_index(const MultiIndex& mi) {
  if (mi.x < 0 || mi.y < 0 || mi.t < 0 || mi.x > 4 || mi.y > 2 || mi.t > 1 ||
      mi.x + mi.y + mi.t > 4)
    throw UnsupportedOperation("unsupported derivative multi-index");
}

}  // namespace

ExpSumTau::ExpSumTau(std::vector<ExpTerm> terms) {
  if (terms.empty()) throw DomainError("tau needs at least one term");
  for (const auto& t : terms) {
    if (!std::isfinite(t.coeff) || !std::isfinite(t.kx) || !std::isfinite(t.py) ||
        !std::isfinite(t.wt) || !std::isfinite(t.phase))
      throw DomainError("non-finite tau term");
    if (t.coeff < 0) throw DomainError("negative tau coefficient");
  }
  for (const auto& t : terms) {
    if (t.coeff == 0.0) continue;
    auto same = std::find_if(terms_.begin(), terms_.end(), [&](const ExpTerm& o) {
      return o.kx == t.kx && o.py == t.py && o.wt == t.wt;
    });
    if (same == terms_.end()) {
      terms_.push_back(t);
      continue;
    }
    const double ph = std::max(same->phase, t.phase);
    same->coeff = same->coeff * std::exp(same->phase - ph) + t.coeff * std::exp(t.phase - ph);
    same->phase = ph;
  }
  if (terms_.empty()) throw DomainError("tau has no positive term");
  for (const auto& t : terms_) logc_.push_back(std::log(t.coeff));
}

double ExpSumTau::exponent(std::size_t m, const Point& p) const {
  const ExpTerm& t = terms_[m];
  return logc_[m] + t.kx * p.x + t.py * p.y + t.wt * p.t + t.phase;
}

ScaledSum eval_tau_scaled(const ExpSumTau& tau, const Point& p) {
  require_finite(p);
  Weights w = weights(tau, p);
  return {w.sum, w.shift};
}

double eval_tau(const ExpSumTau& tau, const Point& p) {
  ScaledSum s = eval_tau_scaled(tau, p);
  double v = s.mantissa * std::exp(s.shift);
  if (!std::isfinite(v) || v == 0.0)
    throw std::range_error("tau not representable; use log_eval_tau");
  return v;
}

double log_eval_tau(const ExpSumTau& tau, const Point& p) {
  ScaledSum s = eval_tau_scaled(tau, p);
  return s.shift + std::log(s.mantissa);
}

double eval_u_value(const ExpSumTau& tau, const Point& p) {
  require_finite(p);
  const auto& terms = tau.terms();
  const std::size_t n = terms.size();
  double m = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, tau.exponent(i, p));
  double sw = 0.0, swk = 0.0;
  // Small fixed-size buffer keeps the grid kernel allocation free.
  double wbuf[16];
  std::vector<double> wheap;
  double* w = wbuf;
  if (n > 16) {
    wheap.resize(n);
    w = wheap.data();
  }
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::exp(tau.exponent(i, p) - m);
    sw += w[i];
    swk += w[i] * terms[i].kx;
  }
  const double mean = swk / sw;
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = terms[i].kx - mean;
    var += w[i] * d * d;
  }
  return 2.0 * var / sw;
}

FieldSample eval_u(const ExpSumTau& tau, const Point& p) {
  FieldSample s;
  s.u = eval_u_value(tau, p);
  return s;
}

FieldSample eval_partials(const ExpSumTau& tau, const Point& p,
                          const std::vector<MultiIndex>& indices) {
  require_finite(p);
  for (const auto& mi : indices) check_index(mi);
  Weights w = weights(tau, p);
  Cumulants k(tau, w);
  FieldSample s;
  s.u = 2.0 * k(2, 0, 0);
  for (const auto& mi : indices) s.partials[mi] = 2.0 * k(mi.x + 2, mi.y, mi.t);
  return s;
}

ResidualPartials residual_partials(const ExpSumTau& tau, const Point& p) {
  require_finite(p);
  Weights w = weights(tau, p);
  Cumulants k(tau, w);
  return {2.0 * k(2, 0, 0), 2.0 * k(3, 0, 0), 2.0 * k(4, 0, 0), 2.0 * k(6, 0, 0),
          2.0 * k(2, 2, 0), 2.0 * k(2, 0, 1), 2.0 * k(3, 0, 1)};
}

}  // namespace kpii
