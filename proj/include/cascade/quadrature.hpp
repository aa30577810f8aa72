#pragma once

#include <functional>
#include <span>

namespace cascade {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // sum of per-panel |K15 - G7| estimates
  int panels = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod integration over the partition
/// given by `breakpoints` (strictly increasing, at least two points). The
/// panel with the largest error estimate is bisected until the total estimate
/// falls below max(abs_tol, rel_tol * |value|). Throws NumericalError when
/// `max_panels` is exceeded.
[[nodiscard]] QuadratureResult integrate_adaptive(const std::function<double(double)>& fn,
                                                  std::span<const double> breakpoints,
                                                  double abs_tol, double rel_tol,
                                                  int max_panels = 200000);

}  // namespace cascade
