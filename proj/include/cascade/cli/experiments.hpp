#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cascade/cli/config.hpp"
#include "cascade/risk.hpp"

namespace cascade::cli {

/// Failure indicator over the span i_1..i_m of a scenario.
struct SparsityPattern {
  std::vector<int> chi;  // 1 = failed; first and last entries are 1

  [[nodiscard]] int sparsity() const;  // zeros in chi
  [[nodiscard]] int failures() const;  // ones in chi
  /// Failed pair indices when the span starts at pair `start`.
  [[nodiscard]] std::vector<int> place(int start) const;
};

/// Number of (pattern, start) placements with m failures and s gaps among
/// `pairs` pairs; saturates at 2^62.
[[nodiscard]] long long placement_count(int pairs, int m, int s);

struct SparsityLevel {
  int s = 0;
  double avg_risk = 0.0;       // mean over placements without infinite entries
  long long n_patterns = 0;    // placements evaluated
  bool exact = false;
  double inf_fraction = 0.0;   // placements with some infinite entry
  long long failed_patterns = 0;  // placements whose conditioning failed
};

/// Sweeps every sparsity level for m failures. A placement contributes the
/// mean risk of its non-failed pairs; placements with an infinite entry are
/// counted in inf_fraction instead.
[[nodiscard]] std::vector<SparsityLevel> sweep_sparsity(const CovarianceMatrix& sigma, int m,
                                                        double failure_state, double d,
                                                        const RiskQuery& query,
                                                        const SparsitySettings& settings,
                                                        std::uint64_t seed);

/// Risk profiles for I = {1..m}, m = 0..max_m (m = 0 is the naive profile).
[[nodiscard]] std::vector<std::vector<ProfileEntry>> sweep_scale(const CovarianceMatrix& sigma,
                                                                 int max_m, double failure_state,
                                                                 double d, const RiskQuery& query);

struct EdgeStudyRow {
  int target = 0;  // 0 for the unmodified graph
  bool stable = false;
  std::optional<RiskResult> risk;
  std::string error;
};

/// Risk of pair j after linking both of its vehicles to each candidate
/// target, plus the baseline row first.
[[nodiscard]] std::vector<EdgeStudyRow> add_edge_study(const WeightedGraph& graph,
                                                       const NoiseParams& np,
                                                       const FailureScenario& scenario, int j,
                                                       double d, const RiskQuery& query);

}  // namespace cascade::cli
