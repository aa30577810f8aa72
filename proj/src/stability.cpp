#include "cascade/stability.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "cascade/error.hpp"

namespace cascade {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

double solve_a(double s1) {
  if (!(s1 > 0.0 && s1 < kHalfPi))
    throw InvalidArgument("solve_a: s1 = " + std::to_string(s1) + " outside (0, pi/2)");
  // a*sin(a) increases strictly on (0, pi/2) from 0 to pi/2.
  double lo = 0.0;
  double hi = kHalfPi;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::sin(mid) < s1)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double stability_bound(double s1) {
  const double a = solve_a(s1);
  return a / std::tan(a);
}

bool in_stability_region(double s1, double s2) {
  if (!(s1 > 0.0 && s1 < kHalfPi) || !(s2 > 0.0)) return false;
  return s2 < stability_bound(s1);
}

double StabilityReport::min_margin() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& mode : modes) {
    if (std::isnan(mode.margin)) return std::numeric_limits<double>::quiet_NaN();
    worst = std::min(worst, mode.margin);
  }
  return worst;
}

StabilityReport check_platoon(const LaplacianSpectrum& spec, double tau, double beta) {
  if (!(tau > 0.0)) throw InvalidArgument("check_platoon: tau must be positive");
  if (!(beta > 0.0)) throw InvalidArgument("check_platoon: beta must be positive");

  StabilityReport report;
  report.stable = true;
  for (int k = 1; k < spec.size(); ++k) {
    ModeStability mode;
    mode.k = k + 1;
    mode.lambda = spec.eigenvalues[static_cast<std::size_t>(k)];
    mode.s1 = mode.lambda * tau;
    mode.s2 = beta * tau;
    if (mode.s1 > 0.0 && mode.s1 < kHalfPi) {
      mode.bound = stability_bound(mode.s1);
      mode.margin = mode.bound - mode.s2;
    } else {
      mode.bound = std::numeric_limits<double>::quiet_NaN();
      mode.margin = std::numeric_limits<double>::quiet_NaN();
    }
    if (!in_stability_region(mode.s1, mode.s2)) report.stable = false;
    report.modes.push_back(mode);
  }
  return report;
}

void require_stable(const StabilityReport& report) {
  if (report.stable) return;
  std::ostringstream msg;
  msg << "platoon is not stable:";
  for (const auto& mode : report.modes)
    if (!in_stability_region(mode.s1, mode.s2))
      msg << " mode " << mode.k << " (lambda=" << mode.lambda << ", s1=" << mode.s1
          << ", s2=" << mode.s2 << ", bound=" << mode.bound << ")";
  throw UnstablePlatoon(msg.str());
}

}  // namespace cascade
