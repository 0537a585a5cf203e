#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

namespace kpii {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct UnsupportedOperation : std::logic_error {
  using std::logic_error::logic_error;
};

// One term c * exp(kx*x + py*y + wt*t + phase).
struct ExpTerm {
  double coeff = 1.0;
  double kx = 0.0;
  double py = 0.0;
  double wt = 0.0;
  double phase = 0.0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};

// Orders of differentiation in x, y, t.
struct MultiIndex {
  int x = 0;
  int y = 0;
  int t = 0;
  auto operator<=>(const MultiIndex&) const = default;
};

struct FieldSample {
  double u = 0.0;
  std::map<MultiIndex, double> partials;
};

// Result of an overflow-safe sum: value = mantissa * exp(shift).
struct ScaledSum {
  double mantissa = 0.0;
  double shift = 0.0;
};

class ExpSumTau {
 public:
  // Merges terms with identical exponent vectors and drops zero coefficients.
  explicit ExpSumTau(std::vector<ExpTerm> terms);

  const std::vector<ExpTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  // Exponent of term m including ln(coeff).
  double exponent(std::size_t m, const Point& p) const;

 private:
  std::vector<ExpTerm> terms_;
  std::vector<double> logc_;
};

ScaledSum eval_tau_scaled(const ExpSumTau& tau, const Point& p);
double eval_tau(const ExpSumTau& tau, const Point& p);
double log_eval_tau(const ExpSumTau& tau, const Point& p);
FieldSample eval_u(const ExpSumTau& tau, const Point& p);
double eval_u_value(const ExpSumTau& tau, const Point& p);
FieldSample eval_partials(const ExpSumTau& tau, const Point& p,
                          const std::vector<MultiIndex>& indices);

// The seven quantities entering the KP residual.
struct ResidualPartials {
  double u, u_x, u_xx, u_xxxx, u_yy, u_t, u_tx;
};
ResidualPartials residual_partials(const ExpSumTau& tau, const Point& p);

}  // namespace kpii
