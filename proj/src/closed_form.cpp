#include "cascade/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "cascade/error.hpp"

namespace cascade::closed_form {

TridiagInverse tridiag_inverse(int m, double sigma_c) {
  if (m < 1) throw InvalidArgument("tridiag_inverse: m must be at least 1");
  if (!(sigma_c > 0.0)) throw InvalidArgument("tridiag_inverse: sigma_c must be positive");

  TridiagInverse out;
  out.m = m;
  out.theta.resize(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) out.theta[k] = std::pow(0.5 * sigma_c, k) * (k + 1);

  // With theta_k = (sigma_c/2)^k (k+1), the factor (sigma_c/2)^{|i-j|} times
  // theta_{min-1} theta_{m-max} / theta_m leaves 2/sigma_c times the
  // polynomial parts, which stays finite for any m.
  const auto unit_theta = [](int k) { return static_cast<double>(k + 1); };
  const double scale = 2.0 / sigma_c;
  out.alpha = Matrix(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) {
      const int lo = std::min(i, j);
      const int hi = std::max(i, j);
      out.alpha(i - 1, j - 1) = scale * unit_theta(lo - 1) * unit_theta(m - hi) / unit_theta(m);
    }
  return out;
}

AdjacencyCase classify(int j, const FailureScenario& scenario, int n) {
  if (j < 1 || j > n - 1)
    throw InvalidArgument("classify: pair " + std::to_string(j) + " outside 1.." +
                          std::to_string(n - 1));
  if (scenario.contains(j))
    throw InvalidArgument("classify: pair " + std::to_string(j) + " already failed");

  const auto& idx = scenario.indices();
  const auto state_of = [&](int pair) {
    const auto it = std::lower_bound(idx.begin(), idx.end(), pair);
    return scenario.states()[static_cast<std::size_t>(it - idx.begin())];
  };

  std::vector<double> left;  // outward from j: j-1, j-2, ...
  for (int k = j - 1; k >= 1 && scenario.contains(k); --k) left.push_back(state_of(k));
  std::vector<double> right;  // j+1, j+2, ...
  for (int k = j + 1; k <= n - 1 && scenario.contains(k); ++k) right.push_back(state_of(k));

  AdjacencyCase out;
  if (left.empty() && right.empty()) return out;
  if (!left.empty() && !right.empty()) {
    out.tag = Adjacency::surrounded;
    out.m1 = static_cast<int>(left.size());
    out.m2 = static_cast<int>(right.size());
    out.run_states.assign(left.rbegin(), left.rend());
    out.run_states.insert(out.run_states.end(), right.begin(), right.end());
    return out;
  }
  out.tag = Adjacency::one_sided;
  out.run_before_j = !left.empty();
  out.run_states = out.run_before_j ? left : right;
  out.m_prime = static_cast<int>(out.run_states.size());
  return out;
}

ConditionalDistribution case_stats(const AdjacencyCase& adjacency, double sigma_j,
                                   double sigma_c, double d) {
  if (!(sigma_c > 0.0)) throw InvalidArgument("case_stats: sigma_c must be positive");

  // Only the failure next to j correlates with it (covariance -sigma_c/2),
  // and runs on opposite sides of j are uncorrelated, so the failed block is
  // block diagonal with one tridiagonal block per run.
  const auto row_sum = [&](const TridiagInverse& inv, int row, std::span<const double> states) {
    double sum = 0.0;
    for (int k = 1; k <= inv.m; ++k) sum += inv(row, k) * (states[k - 1] - d);
    return sum;
  };

  double mu = d;
  double variance = sigma_j * sigma_j;
  switch (adjacency.tag) {
    case Adjacency::none:
      return {d, std::sqrt(sigma_c)};
    case Adjacency::one_sided: {
      const int m = adjacency.m_prime;
      if (m < 1 || static_cast<int>(adjacency.run_states.size()) != m)
        throw InvalidArgument("case_stats: one-sided run is malformed");
      const auto inv = tridiag_inverse(m, sigma_c);
      mu -= 0.5 * sigma_c * row_sum(inv, 1, adjacency.run_states);
      variance -= sigma_c * m / (2.0 * (m + 1));
      break;
    }
    case Adjacency::surrounded: {
      const int m1 = adjacency.m1;
      const int m2 = adjacency.m2;
      if (m1 < 0 || m2 < 0 || static_cast<int>(adjacency.run_states.size()) != m1 + m2)
        throw InvalidArgument("case_stats: surrounding runs are malformed");
      const std::span<const double> states(adjacency.run_states);
      if (m1 > 0) {
        const auto inv = tridiag_inverse(m1, sigma_c);
        mu -= 0.5 * sigma_c * row_sum(inv, m1, states.first(static_cast<std::size_t>(m1)));
        variance -= sigma_c * m1 / (2.0 * (m1 + 1));
      }
      if (m2 > 0) {
        const auto inv = tridiag_inverse(m2, sigma_c);
        mu -= 0.5 * sigma_c * row_sum(inv, 1, states.subspan(static_cast<std::size_t>(m1)));
        variance -= sigma_c * m2 / (2.0 * (m2 + 1));
      }
      break;
    }
  }
  if (!(variance > 0.0)) throw IllConditioned("case_stats: conditional variance is not positive");
  return {mu, std::sqrt(variance)};
}

}  // namespace cascade::closed_form
