#include "cascade/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cascade/error.hpp"
#include "cascade/linalg.hpp"

namespace cascade {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kMaxCondition = 1e12;

// Solves erfc(x) = p for p in (0, 1], so x >= 0. Newton on log erfc inside a
// shrinking bracket, falling back to bisection when a step leaves it.
double erfc_inv_upper(double p) {
  if (p == 1.0) return 0.0;
  // Winitzki's approximation of erf^{-1}(1 - p) as the starting point.
  constexpr double a = 0.147;
  const double ln = std::log(p * (2.0 - p));
  const double t = 2.0 / (std::numbers::pi * a) + 0.5 * ln;
  double x = std::sqrt(std::sqrt(t * t - ln / a) - t);

  double lo = 0.0;   // erfc(lo) >= p
  double hi = 27.5;  // erfc(hi) < p for every normal p
  const double log_p = std::log(p);
  for (int iter = 0; iter < 100; ++iter) {
    const double e = std::erfc(x);
    if (e > p)
      lo = std::max(lo, x);
    else
      hi = std::min(hi, x);
    if (e == p) return x;
    double next;
    if (e > 0.0) {
      const double slope = -2.0 / std::sqrt(std::numbers::pi) * std::exp(-x * x) / e;
      next = x - (std::log(e) - log_p) / slope;
    } else {
      next = 0.5 * (lo + hi);
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

std::vector<double> forward_solve(const Matrix& lower, std::span<const double> b) {
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= lower(i, k) * y[k];
    y[i] /= lower(i, i);
  }
  return y;
}

void require_pair(int j, int pairs, const char* what) {
  if (j < 1 || j > pairs)
    throw InvalidArgument(std::string(what) + ": pair " + std::to_string(j) + " outside 1.." +
                          std::to_string(pairs));
}

}  // namespace

FailureScenario::FailureScenario(std::vector<int> indices, std::vector<double> states)
    : indices_(std::move(indices)), states_(std::move(states)) {
  if (indices_.size() != states_.size())
    throw InvalidArgument("scenario: " + std::to_string(indices_.size()) + " indices but " +
                          std::to_string(states_.size()) + " states");
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 1) throw InvalidArgument("scenario: pair indices start at 1");
    if (k > 0 && indices_[k] <= indices_[k - 1])
      throw InvalidArgument("scenario: pair indices must be strictly increasing");
    if (!std::isfinite(states_[k])) throw InvalidArgument("scenario: states must be finite");
  }
}

FailureScenario FailureScenario::uniform(std::vector<int> indices, double state) {
  std::vector<double> states(indices.size(), state);
  return FailureScenario(std::move(indices), std::move(states));
}

bool FailureScenario::contains(int pair) const {
  return std::binary_search(indices_.begin(), indices_.end(), pair);
}

void FailureScenario::validate(int n_pairs) const {
  if (!indices_.empty() && indices_.back() > n_pairs)
    throw InvalidArgument("scenario: pair " + std::to_string(indices_.back()) + " outside 1.." +
                          std::to_string(n_pairs));
  if (size() >= n_pairs + 1) throw InvalidArgument("scenario: too many failed pairs");
}

void RiskQuery::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidArgument("query: epsilon must lie in (0, 1)");
  if (!(c >= 1.0) || !std::isfinite(c)) throw InvalidArgument("query: c must be at least 1");
}

const char* to_string(RiskBranch b) noexcept {
  switch (b) {
    case RiskBranch::zero: return "zero";
    case RiskBranch::finite: return "finite";
    case RiskBranch::infinite: return "infinite";
  }
  return "?";
}

RiskResult RiskResult::infinite() {
  return {std::numeric_limits<double>::infinity(), RiskBranch::infinite};
}

BlockPartition partition_blocks(const CovarianceMatrix& sigma, int j,
                                const FailureScenario& scenario) {
  require_pair(j, sigma.dim(), "partition_blocks");
  scenario.validate(sigma.dim());
  if (scenario.contains(j))
    throw InvalidArgument("partition_blocks: pair " + std::to_string(j) + " already failed");
  const auto m = static_cast<std::size_t>(scenario.size());
  const auto& idx = scenario.indices();
  BlockPartition out;
  out.s11 = sigma.variance(j);
  out.s12.resize(m);
  out.s22 = Matrix(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    out.s12[a] = sigma(j, idx[a]);
    for (std::size_t b = 0; b < m; ++b) out.s22(a, b) = sigma(idx[a], idx[b]);
  }
  return out;
}

ScenarioConditioner::ScenarioConditioner(const CovarianceMatrix& sigma,
                                         const FailureScenario& scenario, double d)
    : sigma_(&sigma), scenario_(&scenario), d_(d) {
  scenario.validate(sigma.dim());
  const auto m = static_cast<std::size_t>(scenario.size());
  if (m == 0) return;

  Matrix s22(m, m);
  const auto& idx = scenario.indices();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) s22(a, b) = sigma(idx[a], idx[b]);

  const auto eig = jacobi_eigen(s22);
  const double lo = eig.values.front();
  const double hi = eig.values.back();
  if (!(lo > 0.0) || hi / lo > kMaxCondition)
    throw IllConditioned("scenario covariance block is singular or has condition number above 1e12");
  auto chol = cholesky(s22);
  if (!chol) throw IllConditioned("scenario covariance block is not positive definite");
  chol_ = std::move(*chol);

  std::vector<double> deviation(m);
  for (std::size_t a = 0; a < m; ++a) deviation[a] = scenario.states()[a] - d;
  weights_ = cholesky_solve(chol_, deviation);
}

ConditionalDistribution ScenarioConditioner::condition(int j) const {
  require_pair(j, sigma_->dim(), "condition");
  if (scenario_->contains(j))
    throw InvalidArgument("condition: pair " + std::to_string(j) + " already failed");
  const auto& idx = scenario_->indices();
  std::vector<double> s12(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) s12[a] = (*sigma_)(j, idx[a]);

  double mu = d_;
  for (std::size_t a = 0; a < s12.size(); ++a) mu += s12[a] * weights_[a];

  double variance = sigma_->variance(j);
  if (!s12.empty()) {
    const auto y = forward_solve(chol_, s12);
    for (double v : y) variance -= v * v;
  }
  if (!(variance > 0.0))
    throw IllConditioned("conditional variance of pair " + std::to_string(j) +
                         " is not positive");
  return {mu, std::sqrt(variance)};
}

ConditionalDistribution condition(const CovarianceMatrix& sigma, double d, int j,
                                  const FailureScenario& scenario) {
  return ScenarioConditioner(sigma, scenario, d).condition(j);
}

double erf_inv(double y) {
  if (!(y > -1.0 && y < 1.0)) throw InvalidArgument("erf_inv: argument outside (-1, 1)");
  return y >= 0.0 ? erfc_inv_upper(1.0 - y) : -erfc_inv_upper(1.0 + y);
}

double iota(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidArgument("iota: epsilon must lie in (0, 1)");
  // erf(x) = 2 eps - 1  <=>  erfc(-x) = 2 eps  <=>  erfc(x) = 2 (1 - eps)
  return epsilon < 0.5 ? -erfc_inv_upper(2.0 * epsilon) : erfc_inv_upper(2.0 * (1.0 - epsilon));
}

RiskResult var_risk(const ConditionalDistribution& cond, double d, const RiskQuery& query) {
  query.validate();
  if (!(cond.sigma > 0.0)) throw InvalidArgument("var_risk: sigma must be positive");
  if (!(d > 0.0)) throw InvalidArgument("var_risk: d must be positive");

  const double i_eps = iota(query.epsilon);
  const double c = query.c;
  const double zero_threshold = (d - c * cond.mu) / (kSqrt2 * cond.sigma * c);
  const double infinite_threshold = -cond.mu / (kSqrt2 * cond.sigma);
  if (zero_threshold <= i_eps) return RiskResult::zero();
  if (infinite_threshold >= i_eps) return RiskResult::infinite();

  const double value = d / (kSqrt2 * i_eps * cond.sigma + cond.mu) - c;
  // Rounding right at a branch edge can push the value out of (0, inf).
  if (!(value > 0.0)) return RiskResult::zero();
  if (!std::isfinite(value)) return RiskResult::infinite();
  return RiskResult::finite(value);
}

RiskResult naive_risk(double sigma_j, double d, const RiskQuery& query) {
  return var_risk({d, sigma_j}, d, query);
}

std::vector<ProfileEntry> risk_profile(const CovarianceMatrix& sigma,
                                       const FailureScenario& scenario, double d,
                                       const RiskQuery& query) {
  query.validate();
  scenario.validate(sigma.dim());

  std::vector<ProfileEntry> profile(static_cast<std::size_t>(sigma.dim()));
  std::optional<ScenarioConditioner> conditioner;
  std::string setup_error;
  try {
    conditioner.emplace(sigma, scenario, d);
  } catch (const NumericalError& e) {
    setup_error = e.what();
  }

  for (int j = 1; j <= sigma.dim(); ++j) {
    auto& entry = profile[static_cast<std::size_t>(j - 1)];
    entry.j = j;
    if (scenario.contains(j)) {
      entry.is_failed = true;
      entry.risk = RiskResult::zero();
      continue;
    }
    if (!conditioner) {
      entry.error = setup_error;
      continue;
    }
    try {
      entry.cond = conditioner->condition(j);
      entry.risk = var_risk(*entry.cond, d, query);
    } catch (const NumericalError& e) {
      entry.error = e.what();
    }
  }
  return profile;
}

}  // namespace cascade
