#pragma once

#include "cascade/graph.hpp"
#include "cascade/matrix.hpp"

namespace cascade {

/// Noise and controller parameters. Units: tau in seconds, beta in 1/s,
/// g in length/s^(3/2). Nothing is converted.
struct NoiseParams {
  double g = 0.0;
  double tau = 0.0;
  double beta = 0.0;

  /// Throws InvalidArgument unless g != 0, tau > 0, beta > 0.
  void validate() const;
};

struct PlatoonParams {
  int n = 0;
  double d = 0.0;  // target gap between consecutive vehicles

  void validate() const;
};

/// Steady-state covariance of the n-1 inter-vehicle distances.
/// Pair indices are 1-based: pair i is the gap between vehicles i and i+1.
class CovarianceMatrix {
 public:
  /// Throws InvalidArgument unless square, symmetric within 1e-12 (relative to
  /// the largest entry) and with a strictly positive diagonal.
  explicit CovarianceMatrix(Matrix entries);

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  [[nodiscard]] double operator()(int i, int j) const { return entries_(i - 1, j - 1); }
  /// sigma_i^2 in the usual notation.
  [[nodiscard]] double variance(int i) const { return entries_(i - 1, i - 1); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return entries_; }

 private:
  Matrix entries_;
};

/// Integrand 1 / ((s1 s2 - r^2 cos r)^2 + r^2 (s1 - r sin r)^2).
[[nodiscard]] double f_integrand(double s1, double s2, double r);

/// Integral of f_integrand over the real line. Requires (s1, s2) inside the
/// stability region (UnstablePlatoon otherwise) with a margin of at least
/// 1e-6 (NearBoundary otherwise). Relative accuracy is about 1e-10.
[[nodiscard]] double f_integral(double s1, double s2);

/// Same integral with (s1, s2) first rounded to 12 significant digits, so
/// numerically equal modes from different code paths share one value.
[[nodiscard]] double f_integral_rounded(double s1, double s2);

/// Rounds to 12 significant digits.
[[nodiscard]] double round_significant(double x);

/// sigma_ij = g^2 tau^3 / (2 pi) * sum_{k>=2} (e~_i.q_k)(e~_j.q_k) f(lambda_k tau, beta tau)
/// with e~_i = e_{i+1} - e_i. Checks platoon stability first. Distinct modes
/// are integrated in parallel; the sum runs in mode order.
[[nodiscard]] CovarianceMatrix steady_state_covariance(const LaplacianSpectrum& spec,
                                                       const NoiseParams& np);

/// g^2 tau^3 f(n tau, beta tau) / pi: the pair variance on a complete graph.
[[nodiscard]] double complete_graph_variance(int n, const NoiseParams& np);

/// Tridiagonal covariance of a complete graph: sigma_c on the diagonal and
/// -sigma_c/2 next to it.
[[nodiscard]] CovarianceMatrix complete_graph_covariance(int n, const NoiseParams& np);

}  // namespace cascade
