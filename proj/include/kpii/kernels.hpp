#pragma once

#include <cstddef>
#include <vector>

#include "kpii/tau.hpp"

namespace kpii {

struct GridSpec {
  double xmin = -1.0, xmax = 1.0;
  int nx = 2;
  double ymin = -1.0, ymax = 1.0;
  int ny = 2;

  double x(int i) const { return nx == 1 ? xmin : xmin + (xmax - xmin) * i / (nx - 1); }
  double y(int j) const { return ny == 1 ? ymin : ymin + (ymax - ymin) * j / (ny - 1); }
};

// Thread count for parallel kernels, capped by KPII_STEM_THREADS when set.
int kernel_threads();

// u on the grid, row-major with x fastest: values[j * nx + i].
std::vector<double> sample_grid_serial(const ExpSumTau& tau, const GridSpec& g, double t);
std::vector<double> sample_grid(const ExpSumTau& tau, const GridSpec& g, double t);

// KP residual at each point.
double residual_at(const ExpSumTau& tau, const Point& p);
std::vector<double> residual_sweep_serial(const ExpSumTau& tau, const std::vector<Point>& pts);
std::vector<double> residual_sweep(const ExpSumTau& tau, const std::vector<Point>& pts);

}  // namespace kpii
