#pragma once

#include <vector>

#include "cascade/matrix.hpp"
#include "cascade/risk.hpp"

namespace cascade::closed_form {

/// Inverse of the m x m tridiagonal matrix with sigma_c on the diagonal and
/// -sigma_c/2 off it, from the Usmani recurrence theta_k = 2^-k sigma_c^k (k+1).
struct TridiagInverse {
  int m = 0;
  Matrix alpha;                // 0-based storage of alpha_ij
  std::vector<double> theta;   // theta_0 .. theta_m

  /// 1-based access.
  [[nodiscard]] double operator()(int i, int j) const { return alpha(i - 1, j - 1); }
};

/// Requires m >= 1 and sigma_c > 0.
[[nodiscard]] TridiagInverse tridiag_inverse(int m, double sigma_c);

enum class Adjacency { none, one_sided, surrounded };

/// Position of pair j relative to runs of consecutive failures.
///
/// one_sided: m_prime failures form a run touching j; run_states is ordered
/// outward from j (the failure adjacent to j first), and `run_before_j` says
/// whether the run sits at lower pair indices.
/// surrounded: runs of m1 (below j) and m2 (above j) failures; run_states is
/// [left run front to back, right run front to back], so entries m1 and m1+1
/// (1-based) are the failures adjacent to j.
struct AdjacencyCase {
  Adjacency tag = Adjacency::none;
  int m_prime = 0;
  bool run_before_j = false;
  int m1 = 0;
  int m2 = 0;
  std::vector<double> run_states;
};

/// Failures not in a run touching j are ignored. Throws InvalidArgument if
/// j is itself failed or outside 1..n-1.
[[nodiscard]] AdjacencyCase classify(int j, const FailureScenario& scenario, int n);

/// Conditional law of pair j on a complete graph, with sigma_j the standard
/// deviation of pair j and sigma_c the complete-graph pair variance.
[[nodiscard]] ConditionalDistribution case_stats(const AdjacencyCase& adjacency, double sigma_j,
                                                 double sigma_c, double d);

}  // namespace cascade::closed_form
