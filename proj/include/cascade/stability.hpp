#pragma once

#include <vector>

#include "cascade/graph.hpp"

namespace cascade {

/// One Laplacian mode checked against the delay-stability region.
struct ModeStability {
  int k = 0;  // 1-based mode index, 2..n
  double lambda = 0.0;
  double s1 = 0.0;  // lambda * tau
  double s2 = 0.0;  // beta * tau
  double bound = 0.0;   // a / tan(a); NaN when s1 is outside (0, pi/2)
  double margin = 0.0;  // bound - s2
};

struct StabilityReport {
  bool stable = false;
  std::vector<ModeStability> modes;

  /// Smallest margin over all modes (NaN if some mode has none).
  [[nodiscard]] double min_margin() const;
};

/// Root a in (0, pi/2) of a*sin(a) = s1, by bisection.
/// Throws InvalidArgument unless 0 < s1 < pi/2.
[[nodiscard]] double solve_a(double s1);

/// a/tan(a) with a = solve_a(s1): the supremum of admissible s2 for this s1.
[[nodiscard]] double stability_bound(double s1);

/// Open-region membership test; false anywhere outside the domain.
[[nodiscard]] bool in_stability_region(double s1, double s2);

/// Checks (lambda_k tau, beta tau) for k = 2..n. Throws InvalidArgument
/// unless tau > 0 and beta > 0.
[[nodiscard]] StabilityReport check_platoon(const LaplacianSpectrum& spec, double tau,
                                            double beta);

/// Throws UnstablePlatoon with a per-mode diagnostic if the report is not stable.
void require_stable(const StabilityReport& report);

}  // namespace cascade
