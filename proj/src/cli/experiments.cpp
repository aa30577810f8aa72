#include "cascade/cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "cascade/parallel.hpp"
#include "cascade/stability.hpp"

namespace cascade::cli {

namespace {

constexpr long long kSaturated = 1LL << 62;

enum class Outcome { finite, infinite, error };

struct PlacementResult {
  Outcome outcome = Outcome::error;
  double mean = 0.0;
};

PlacementResult evaluate_placement(const CovarianceMatrix& sigma, std::vector<int> indices,
                                   double failure_state, double d, const RiskQuery& query) {
  PlacementResult out;
  const FailureScenario scenario = FailureScenario::uniform(std::move(indices), failure_state);
  try {
    const ScenarioConditioner conditioner(sigma, scenario, d);
    double sum = 0.0;
    int count = 0;
    for (int j = 1; j <= sigma.dim(); ++j) {
      if (scenario.contains(j)) continue;
      const RiskResult r = var_risk(conditioner.condition(j), d, query);
      if (r.is_infinite()) {
        out.outcome = Outcome::infinite;
        return out;
      }
      sum += r.value;
      ++count;
    }
    out.outcome = Outcome::finite;
    out.mean = sum / count;
  } catch (const NumericalError&) {
    out.outcome = Outcome::error;
  }
  return out;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

// Pattern with failures at both ends and the given interior gap positions.
SparsityPattern pattern_from_gaps(int m, int s, const std::vector<int>& gaps) {
  SparsityPattern p;
  p.chi.assign(static_cast<std::size_t>(m + s), 1);
  for (int g : gaps) p.chi[static_cast<std::size_t>(g + 1)] = 0;
  return p;
}

// Advances a sorted s-subset of 0..k-1 in lexicographic order.
bool next_combination(std::vector<int>& c, int k) {
  const int s = static_cast<int>(c.size());
  int i = s - 1;
  while (i >= 0 && c[i] == k - s + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int t = i + 1; t < s; ++t) c[t] = c[t - 1] + 1;
  return true;
}

}  // namespace

int SparsityPattern::sparsity() const {
  return static_cast<int>(std::count(chi.begin(), chi.end(), 0));
}

int SparsityPattern::failures() const {
  return static_cast<int>(std::count(chi.begin(), chi.end(), 1));
}

std::vector<int> SparsityPattern::place(int start) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < chi.size(); ++k) {
    if (chi[k] == 1) out.push_back(start + static_cast<int>(k));
  }
  return out;
}

long long placement_count(int pairs, int m, int s) {
  if (m < 1 || s < 0 || m + s > pairs) return 0;
  if (m == 1) return s == 0 ? pairs : 0;
  const int interior = m + s - 2;
  long double binom = 1.0L;
  for (int k = 1; k <= s; ++k) binom = binom * (interior - s + k) / k;
  const long double total = std::round(binom) * static_cast<long double>(pairs - m - s + 1);
  return total >= static_cast<long double>(kSaturated) ? kSaturated : static_cast<long long>(total);
}

std::vector<SparsityLevel> sweep_sparsity(const CovarianceMatrix& sigma, int m,
                                          double failure_state, double d,
                                          const RiskQuery& query,
                                          const SparsitySettings& settings,
                                          std::uint64_t seed) {
  const int pairs = sigma.dim();
  if (m < 1 || m >= pairs) {
    throw InvalidArgument("sweep-sparsity: m must satisfy 1 <= m < " + std::to_string(pairs));
  }
  query.validate();

  std::vector<SparsityLevel> levels;
  const int max_s = m == 1 ? 0 : pairs - m;
  for (int s = 0; s <= max_s; ++s) {
    const int span = m + s;
    const long long total = placement_count(pairs, m, s);
    SparsityLevel level;
    level.s = s;
    level.exact = total <= settings.exact_limit;

    std::vector<std::vector<int>> placements;
    if (level.exact) {
      placements.reserve(static_cast<std::size_t>(total));
      std::vector<int> gaps(static_cast<std::size_t>(s));
      std::iota(gaps.begin(), gaps.end(), 0);
      do {
        const SparsityPattern p = pattern_from_gaps(m, s, gaps);
        for (int start = 1; start + span - 1 <= pairs; ++start) placements.push_back(p.place(start));
      } while (next_combination(gaps, std::max(span - 2, 0)));
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(s)};
      std::mt19937_64 rng(seq);
      std::vector<int> slots(static_cast<std::size_t>(span - 2));
      placements.reserve(static_cast<std::size_t>(settings.samples));
      for (int k = 0; k < settings.samples; ++k) {
        std::iota(slots.begin(), slots.end(), 0);
        for (int t = 0; t < s; ++t) {
          const auto pick = t + static_cast<int>(uniform_below(rng, slots.size() - t));
          std::swap(slots[t], slots[pick]);
        }
        std::vector<int> gaps(slots.begin(), slots.begin() + s);
        std::sort(gaps.begin(), gaps.end());
        const int start = 1 + static_cast<int>(uniform_below(rng, pairs - span + 1));
        placements.push_back(pattern_from_gaps(m, s, gaps).place(start));
      }
    }

    std::vector<PlacementResult> results(placements.size());
    parallel_for(placements.size(), [&](std::size_t i) {
      results[i] = evaluate_placement(sigma, placements[i], failure_state, d, query);
    });

    double sum = 0.0;
    long long finite = 0;
    long long infinite = 0;
    for (const auto& r : results) {
      if (r.outcome == Outcome::finite) {
        sum += r.mean;
        ++finite;
      } else if (r.outcome == Outcome::infinite) {
        ++infinite;
      } else {
        ++level.failed_patterns;
      }
    }
    level.n_patterns = static_cast<long long>(results.size());
    const long long usable = finite + infinite;
    level.inf_fraction = usable > 0 ? static_cast<double>(infinite) / static_cast<double>(usable)
                                    : std::nan("");
    if (finite > 0) {
      level.avg_risk = sum / static_cast<double>(finite);
    } else {
      level.avg_risk = infinite > 0 ? std::numeric_limits<double>::infinity() : std::nan("");
    }
    levels.push_back(level);
  }
  return levels;
}

std::vector<std::vector<ProfileEntry>> sweep_scale(const CovarianceMatrix& sigma, int max_m,
                                                   double failure_state, double d,
                                                   const RiskQuery& query) {
  if (max_m < 0 || max_m >= sigma.dim()) {
    throw InvalidArgument("sweep-scale: max-m must satisfy 0 <= max-m < " +
                          std::to_string(sigma.dim()));
  }
  std::vector<std::vector<ProfileEntry>> out;
  for (int m = 0; m <= max_m; ++m) {
    std::vector<int> indices(static_cast<std::size_t>(m));
    std::iota(indices.begin(), indices.end(), 1);
    out.push_back(risk_profile(sigma, FailureScenario::uniform(std::move(indices), failure_state),
                               d, query));
  }
  return out;
}

std::vector<EdgeStudyRow> add_edge_study(const WeightedGraph& graph, const NoiseParams& np,
                                         const FailureScenario& scenario, int j, double d,
                                         const RiskQuery& query) {
  const int n = graph.size();
  if (j < 1 || j > n - 1) {
    throw InvalidArgument("add-edge: pair must lie in 1.." + std::to_string(n - 1));
  }
  if (scenario.contains(j)) {
    throw InvalidArgument("add-edge: pair " + std::to_string(j) + " is in the failure scenario");
  }
  scenario.validate(n - 1);
  query.validate();

  auto evaluate = [&](const WeightedGraph& g, int target) {
    EdgeStudyRow row;
    row.target = target;
    const LaplacianSpectrum spec = spectrum(laplacian(g));
    row.stable = check_platoon(spec, np.tau, np.beta).stable;
    if (!row.stable) return row;
    try {
      const CovarianceMatrix sigma = steady_state_covariance(spec, np);
      const ScenarioConditioner conditioner(sigma, scenario, d);
      row.risk = var_risk(conditioner.condition(j), d, query);
    } catch (const NumericalError& e) {
      row.error = e.what();
    }
    return row;
  };

  std::vector<EdgeStudyRow> rows;
  rows.push_back(evaluate(graph, 0));
  if (!rows.front().stable) {
    require_stable(check_platoon(spectrum(laplacian(graph)), np.tau, np.beta));
  }
  for (int t = 1; t <= n; ++t) {
    if (t == j || t == j + 1) continue;
    rows.push_back(evaluate(add_pair_edges(graph, j, t), t));
  }
  return rows;
}

}  // namespace cascade::cli
