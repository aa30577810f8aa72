#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cascade/covariance.hpp"
#include "cascade/matrix.hpp"

namespace cascade {

/// Pairs that have already collided and the distances observed on them.
/// Indices are 1-based pair labels, strictly increasing.
class FailureScenario {
 public:
  FailureScenario() = default;
  /// Throws InvalidArgument on unsorted/duplicate/non-positive indices or a
  /// size mismatch between indices and states.
  FailureScenario(std::vector<int> indices, std::vector<double> states);

  /// Every failed pair observed at the same distance.
  static FailureScenario uniform(std::vector<int> indices, double state);

  [[nodiscard]] const std::vector<int>& indices() const noexcept { return indices_; }
  [[nodiscard]] const std::vector<double>& states() const noexcept { return states_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(indices_.size()); }
  [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
  [[nodiscard]] bool contains(int pair) const;

  /// Throws InvalidArgument if an index exceeds n_pairs or m >= n_pairs + 1.
  void validate(int n_pairs) const;

 private:
  std::vector<int> indices_;
  std::vector<double> states_;
};

/// Gaussian law of one pair distance given the failure scenario.
struct ConditionalDistribution {
  double mu = 0.0;
  double sigma = 0.0;
};

/// Confidence parameter and systemic-set offset of the alarm zones
/// C_delta = (-inf, d / (delta + c)).
struct RiskQuery {
  double epsilon = 0.1;
  double c = 1.0;

  /// Throws InvalidArgument unless 0 < epsilon < 1 and c >= 1.
  void validate() const;
};

enum class RiskBranch { zero, finite, infinite };

[[nodiscard]] const char* to_string(RiskBranch b) noexcept;

/// Value-at-risk on the extended nonnegative reals.
struct RiskResult {
  double value = 0.0;
  RiskBranch branch = RiskBranch::zero;

  static RiskResult zero() { return {0.0, RiskBranch::zero}; }
  static RiskResult infinite();
  static RiskResult finite(double v) { return {v, RiskBranch::finite}; }

  [[nodiscard]] bool is_infinite() const noexcept { return branch == RiskBranch::infinite; }
};

/// Blocks of the (m+1)x(m+1) covariance of (d_j, d_{i_1}, ..., d_{i_m}).
struct BlockPartition {
  double s11 = 0.0;
  std::vector<double> s12;
  Matrix s22;
};

/// Throws InvalidArgument if j is in the scenario or out of range.
[[nodiscard]] BlockPartition partition_blocks(const CovarianceMatrix& sigma, int j,
                                              const FailureScenario& scenario);

/// Conditions pair distances on one failure scenario. Factorizes the failed
/// block once so every pair outside the scenario costs O(m^2).
class ScenarioConditioner {
 public:
  /// Throws IllConditioned if the failed block is singular or its condition
  /// number exceeds 1e12.
  ScenarioConditioner(const CovarianceMatrix& sigma, const FailureScenario& scenario,
                      double d);

  /// mu = d + S12 S22^{-1} (d_c - d 1), sigma^2 = S11 - S12 S22^{-1} S21.
  [[nodiscard]] ConditionalDistribution condition(int j) const;

 private:
  const CovarianceMatrix* sigma_;
  const FailureScenario* scenario_;
  double d_;
  Matrix chol_;
  std::vector<double> weights_;  // S22^{-1} (d_c - d 1)
};

[[nodiscard]] ConditionalDistribution condition(const CovarianceMatrix& sigma, double d, int j,
                                                const FailureScenario& scenario);

/// erf^{-1}(2 epsilon - 1). Throws InvalidArgument unless 0 < epsilon < 1.
[[nodiscard]] double iota(double epsilon);

/// Inverse error function on (-1, 1).
[[nodiscard]] double erf_inv(double y);

/// Closed-form VaR of the collision alarm zones for N(mu, sigma):
/// 0 if (d - c mu)/(sqrt2 sigma c) <= iota, infinity if -mu/(sqrt2 sigma) >= iota,
/// d / (sqrt2 iota sigma + mu) - c otherwise.
[[nodiscard]] RiskResult var_risk(const ConditionalDistribution& cond, double d,
                                  const RiskQuery& query);

/// Unconditioned risk of a pair with standard deviation sigma_j.
[[nodiscard]] RiskResult naive_risk(double sigma_j, double d, const RiskQuery& query);

struct ProfileEntry {
  int j = 0;
  bool is_failed = false;
  std::optional<RiskResult> risk;  // empty when conditioning failed
  std::optional<ConditionalDistribution> cond;
  std::string error;
};

/// Risk of every pair given the scenario; failed pairs report zero. If the
/// scenario cannot be conditioned on, every non-failed entry carries the error.
[[nodiscard]] std::vector<ProfileEntry> risk_profile(const CovarianceMatrix& sigma,
                                                     const FailureScenario& scenario,
                                                     double d, const RiskQuery& query);

}  // namespace cascade
