#include "cascade/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "cascade/error.hpp"
#include "cascade/parallel.hpp"
#include "cascade/quadrature.hpp"
#include "cascade/stability.hpp"

namespace cascade {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kRelTol = 1e-10;
constexpr double kMinMargin = 1e-6;
constexpr double kMinCutoff = 50.0;

// Panel edges that resolve the low-frequency resonance, the delay crossover
// near r = a and the oscillation period. The low-frequency pair comes from
// the small-r approximation r^2 - i s1 r - s1 s2 = 0 of the denominator.
std::vector<double> initial_breakpoints(double s1, double s2, double cutoff) {
  std::vector<double> pts{0.0};

  const double disc = s1 * s2 - 0.25 * s1 * s1;
  double center = 0.0;
  double width = 0.0;
  if (disc > 0.0) {
    center = std::sqrt(disc);
    width = 0.5 * s1;
  } else {
    width = 0.5 * s1 - std::sqrt(-disc);
  }
  width = std::max(width, 1e-300);

  for (double h = 1e-2 * std::min(width, center > 0.0 ? center : width); h < kQuarterPi; h *= 2.0)
    pts.push_back(h);
  if (center > 0.0)
    for (int k = -8; k <= 8; ++k) {
      const double r = center + 0.5 * k * width;
      if (r > 0.0) pts.push_back(r);
    }

  const double a = solve_a(s1);
  pts.push_back(a);
  for (int k = 0; k <= 10; ++k) {
    const double offset = 0.1 * std::ldexp(1.0, -k);
    pts.push_back(a + offset);
    if (a - offset > 0.0) pts.push_back(a - offset);
  }

  for (double r = kQuarterPi; r < cutoff; r += kQuarterPi) pts.push_back(r);
  pts.push_back(cutoff);

  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  out.reserve(pts.size());
  for (double r : pts) {
    if (r > cutoff) break;
    if (out.empty() || r > out.back() * (1.0 + 1e-12) + 1e-300) out.push_back(r);
  }
  return out;
}

std::vector<double> uniform_breakpoints(double from, double to) {
  std::vector<double> pts{from};
  for (double r = from + kQuarterPi; r < to; r += kQuarterPi) pts.push_back(r);
  pts.push_back(to);
  return pts;
}

}  // namespace

void NoiseParams::validate() const {
  if (!(g != 0.0) || !std::isfinite(g)) throw InvalidArgument("noise: g must be nonzero");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("noise: tau must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("noise: beta must be positive");
}

void PlatoonParams::validate() const {
  if (n < 2) throw InvalidArgument("platoon: n must be at least 2");
  if (!(d > 0.0) || !std::isfinite(d)) throw InvalidArgument("platoon: d must be positive");
}

CovarianceMatrix::CovarianceMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    throw InvalidArgument("covariance: matrix must be square and non-empty");
  double scale = 0.0;
  for (double x : entries_.data()) scale = std::max(scale, std::abs(x));
  if (!is_symmetric(entries_, 1e-12 * std::max(scale, 1.0)))
    throw InvalidArgument("covariance: matrix is not symmetric");
  for (std::size_t i = 0; i < entries_.rows(); ++i)
    if (!(entries_(i, i) > 0.0))
      throw InvalidArgument("covariance: diagonal entry " + std::to_string(i + 1) +
                            " is not positive");
}

double f_integrand(double s1, double s2, double r) {
  const double c = std::cos(r);
  const double s = std::sin(r);
  const double re = s1 * s2 - r * r * c;
  const double im = r * (s1 - r * s);
  return 1.0 / (re * re + im * im);
}

double f_integral(double s1, double s2) {
  if (!in_stability_region(s1, s2))
    throw UnstablePlatoon("f_integral: (s1, s2) = (" + std::to_string(s1) + ", " +
                          std::to_string(s2) + ") is outside the stability region");
  const double margin = stability_bound(s1) - s2;
  if (margin < kMinMargin)
    throw NearBoundary("f_integral: stability margin " + std::to_string(margin) +
                       " is below 1e-6; the integrand is near-singular");

  const auto integrand = [s1, s2](double r) { return f_integrand(s1, s2, r); };

  // The integrand is even, so integrate the half line. Beyond r = 5 the
  // denominator exceeds r^4 / 4, so the tail past R is at most 4 / (3 R^3).
  double cutoff = kMinCutoff;
  const auto head = initial_breakpoints(s1, s2, cutoff);
  double half = integrate_adaptive(integrand, head, 1e-300, kRelTol).value;

  const double needed = std::cbrt(4.0 / (3.0 * kRelTol * half));
  if (needed > cutoff) {
    const double extended = std::ceil(needed / kQuarterPi) * kQuarterPi;
    const auto tail = uniform_breakpoints(cutoff, extended);
    half += integrate_adaptive(integrand, tail, 0.1 * kRelTol * half, kRelTol).value;
    cutoff = extended;
  }
  return 2.0 * half;
}

double round_significant(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return std::strtod(buf, nullptr);
}

double f_integral_rounded(double s1, double s2) {
  return f_integral(round_significant(s1), round_significant(s2));
}

CovarianceMatrix steady_state_covariance(const LaplacianSpectrum& spec, const NoiseParams& np) {
  np.validate();
  require_stable(check_platoon(spec, np.tau, np.beta));

  const int n = spec.size();
  const double s2 = np.beta * np.tau;

  // One integral per distinct (rounded) mode.
  std::map<std::pair<double, double>, std::size_t> slot_of;
  std::vector<std::pair<double, double>> keys;
  std::vector<std::size_t> mode_slot(static_cast<std::size_t>(n), 0);
  for (int k = 1; k < n; ++k) {
    const auto key = std::make_pair(round_significant(spec.eigenvalues[k] * np.tau),
                                    round_significant(s2));
    auto [it, inserted] = slot_of.emplace(key, keys.size());
    if (inserted) keys.push_back(key);
    mode_slot[static_cast<std::size_t>(k)] = it->second;
  }
  std::vector<double> f_values(keys.size());
  parallel_for(keys.size(), [&](std::size_t i) {
    f_values[i] = f_integral(keys[i].first, keys[i].second);
  });

  // u(i, k) = e~_i . q_k = Q(i+1, k) - Q(i, k)
  const Matrix& q = spec.eigenvectors;
  const auto pairs = static_cast<std::size_t>(n - 1);
  Matrix u(pairs, static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < pairs; ++i)
    for (int k = 1; k < n; ++k) u(i, k) = q(i + 1, k) - q(i, k);

  const double prefactor = np.g * np.g * np.tau * np.tau * np.tau / (2.0 * std::numbers::pi);
  Matrix sigma(pairs, pairs);
  for (std::size_t i = 0; i < pairs; ++i)
    for (std::size_t j = i; j < pairs; ++j) {
      double sum = 0.0;
      for (int k = 1; k < n; ++k)
        sum += u(i, k) * u(j, k) * f_values[mode_slot[static_cast<std::size_t>(k)]];
      sigma(i, j) = sigma(j, i) = prefactor * sum;
    }
  return CovarianceMatrix(std::move(sigma));
}

double complete_graph_variance(int n, const NoiseParams& np) {
  np.validate();
  if (n < 2) throw InvalidArgument("complete graph: need n >= 2");
  const double f = f_integral_rounded(n * np.tau, np.beta * np.tau);
  return np.g * np.g * np.tau * np.tau * np.tau * f / std::numbers::pi;
}

CovarianceMatrix complete_graph_covariance(int n, const NoiseParams& np) {
  const double sigma_c = complete_graph_variance(n, np);
  const auto pairs = static_cast<std::size_t>(n - 1);
  Matrix sigma(pairs, pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    sigma(i, i) = sigma_c;
    if (i + 1 < pairs) sigma(i, i + 1) = sigma(i + 1, i) = -0.5 * sigma_c;
  }
  return CovarianceMatrix(std::move(sigma));
}

}  // namespace cascade
