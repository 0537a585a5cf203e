#include "kpii/kernels.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace kpii {

int kernel_threads() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("KPII_STEM_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0 && cap < n) n = cap;
    } catch (const std::exception&) {
    }
  }
  return n;
}

std::vector<double> sample_grid_serial(const ExpSumTau& tau, const GridSpec& g, double t) {
  std::vector<double> out(static_cast<std::size_t>(g.nx) * g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out[static_cast<std::size_t>(j) * g.nx + i] = eval_u_value(tau, {g.x(i), g.y(j), t});
  return out;
}

std::vector<double> sample_grid(const ExpSumTau& tau, const GridSpec& g, double t) {
  std::vector<double> out(static_cast<std::size_t>(g.nx) * g.ny);
  const long long total = static_cast<long long>(g.nx) * g.ny;
#pragma omp parallel for schedule(static) num_threads(kernel_threads())
  for (long long q = 0; q < total; ++q) {
    const int j = static_cast<int>(q / g.nx), i = static_cast<int>(q % g.nx);
    out[q] = eval_u_value(tau, {g.x(i), g.y(j), t});
  }
  return out;
}

double residual_at(const ExpSumTau& tau, const Point& p) {
  const ResidualPartials d = residual_partials(tau, p);
  return d.u_tx + 6.0 * d.u_x * d.u_x + 6.0 * d.u * d.u_xx + d.u_xxxx + 3.0 * d.u_yy;
}

std::vector<double> residual_sweep_serial(const ExpSumTau& tau, const std::vector<Point>& pts) {
  std::vector<double> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = residual_at(tau, pts[i]);
  return out;
}

std::vector<double> residual_sweep(const ExpSumTau& tau, const std::vector<Point>& pts) {
  std::vector<double> out(pts.size());
  const long long n = static_cast<long long>(pts.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(kernel_threads())
  for (long long i = 0; i < n; ++i) out[i] = residual_at(tau, pts[i]);
  return out;
}

}  // namespace kpii
