#include "cascade/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cascade/error.hpp"
#include "cascade/parallel.hpp"
#include "cascade/stability.hpp"

namespace cascade::sim {

namespace {

long to_steps(double seconds, double dt) { return std::lround(seconds / dt); }

}  // namespace

void SimConfig::validate(double tau) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("sim: dt must be positive");
  if (!(burn_in >= 10.0 * tau))
    throw InvalidArgument("sim: burn_in must be at least 10 tau (" + std::to_string(10.0 * tau) +
                          " s)");
  if (!(sample_interval >= dt)) throw InvalidArgument("sim: sample_interval must be at least dt");
  if (samples_per_trial < 2) throw InvalidArgument("sim: samples_per_trial must be at least 2");
  if (trials < 2) throw InvalidArgument("sim: trials must be at least 2");
  (void)delay_steps(tau);
}

int SimConfig::delay_steps(double tau) const {
  const long steps = std::lround(tau / dt);
  if (steps < 1 || std::abs(static_cast<double>(steps) * dt - tau) > 1e-9 * tau)
    throw InvalidArgument("sim: tau = " + std::to_string(tau) +
                          " is not an integer multiple of dt = " + std::to_string(dt));
  return static_cast<int>(steps);
}

SimConfig default_config(const LaplacianSpectrum& spec, const NoiseParams& np) {
  SimConfig cfg;
  cfg.dt = np.tau / std::ceil(np.tau / 1e-3 - 1e-9);
  const double lambda2 = spec.eigenvalues.at(1);
  cfg.burn_in = std::max(10.0 * np.tau, 20.0 / (np.beta * lambda2));

  double slowest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < spec.eigenvalues.size(); ++k) {
    const double lambda = spec.eigenvalues[k];
    const double disc = lambda * lambda - 4.0 * np.beta * lambda;
    const double rate = disc < 0.0 ? 0.5 * lambda : 0.5 * (lambda - std::sqrt(disc));
    slowest = std::min(slowest, rate);
  }
  cfg.sample_interval = std::max(20.0 * np.tau, 2.0 / slowest);
  return cfg;
}

SparseLaplacian::SparseLaplacian(const Matrix& lap) : n_(static_cast<int>(lap.rows())) {
  row_start_.reserve(lap.rows() + 1);
  row_start_.push_back(0);
  for (std::size_t i = 0; i < lap.rows(); ++i) {
    for (std::size_t j = 0; j < lap.cols(); ++j)
      if (lap(i, j) != 0.0) {
        col_.push_back(static_cast<int>(j));
        val_.push_back(lap(i, j));
      }
    row_start_.push_back(col_.size());
  }
}

void SparseLaplacian::apply(std::span<const double> in, std::span<double> out) const {
  for (int i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (std::size_t e = row_start_[i]; e < row_start_[i + 1]; ++e) sum += val_[e] * in[col_[e]];
    out[i] = sum;
  }
}

SimState::SimState(int n, double d, int delay_steps)
    : n_(n),
      slots_(static_cast<std::size_t>(delay_steps) + 1),
      ring_(slots_ * 2 * static_cast<std::size_t>(n), 0.0),
      r_(static_cast<std::size_t>(n)),
      work_(2 * static_cast<std::size_t>(n)) {
  if (n < 2) throw InvalidArgument("sim: need at least two vehicles");
  if (delay_steps < 1) throw InvalidArgument("sim: delay must span at least one step");
  for (int i = 0; i < n; ++i) r_[i] = d * (i + 1);
  const std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
  set_history(r_, zero);
}

void SimState::set_history(std::span<const double> x, std::span<const double> v) {
  const auto n = static_cast<std::size_t>(n_);
  for (std::size_t slot = 0; slot < slots_; ++slot) {
    std::copy(x.begin(), x.end(), ring_.begin() + static_cast<long>(slot * 2 * n));
    std::copy(v.begin(), v.end(), ring_.begin() + static_cast<long>(slot * 2 * n + n));
  }
}

std::span<const double> SimState::current(int which) const {
  const auto n = static_cast<std::size_t>(n_);
  return {ring_.data() + head_ * 2 * n + static_cast<std::size_t>(which) * n, n};
}

std::span<const double> SimState::oldest(int which) const {
  const auto n = static_cast<std::size_t>(n_);
  const std::size_t slot = (head_ + 1) % slots_;
  return {ring_.data() + slot * 2 * n + static_cast<std::size_t>(which) * n, n};
}

void step(SimState& state, const NoiseParams& np, const SparseLaplacian& lap,
          std::span<const double> noise, double dt) {
  const auto n = static_cast<std::size_t>(state.n_);
  const auto x = state.current(0);
  const auto v = state.current(1);
  const auto x_old = state.oldest(0);
  const auto v_old = state.oldest(1);

  // w = v(t - tau) + beta (x(t - tau) - r); the drift is -L w.
  std::span<double> w(state.work_.data(), n);
  std::span<double> lw(state.work_.data() + n, n);
  for (std::size_t i = 0; i < n; ++i) w[i] = v_old[i] + np.beta * (x_old[i] - state.r_[i]);
  lap.apply(w, lw);

  // The oldest slot is consumed; it now receives the new state.
  const std::size_t next = (state.head_ + 1) % state.slots_;
  double* nx = state.ring_.data() + next * 2 * n;
  double* nv = nx + n;
  const double diffusion = np.g * std::sqrt(dt);
  bool finite = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i] + v[i] * dt;
    const double vi = v[i] - lw[i] * dt + diffusion * noise[i];
    nx[i] = xi;
    nv[i] = vi;
    finite = finite && std::isfinite(xi) && std::isfinite(vi);
  }
  state.head_ = next;
  ++state.steps_;
  if (!finite)
    throw Divergence("sim: state became non-finite at step " + std::to_string(state.steps_));
}

std::vector<double> feedback_law(const WeightedGraph& g, double beta, double d,
                                 std::span<const double> x, std::span<const double> v) {
  const int n = g.size();
  std::vector<double> u(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i <= n; ++i) {
    double velocity_term = 0.0;
    double position_term = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double k = g.weight(i, j);
      velocity_term += k * (v[j - 1] - v[i - 1]);
      position_term += k * (x[j - 1] - x[i - 1] - (j - i) * d);
    }
    u[i - 1] = velocity_term + beta * position_term;
  }
  return u;
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  engine_.seed(seq);
}

double NormalStream::next() {
  if (spare_) {
    const double out = *spare_;
    spare_.reset();
    return out;
  }
  constexpr double kUnit = 0x1.0p-53;
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * kUnit;  // (0, 1]
  const double u2 = static_cast<double>(engine_() >> 11) * kUnit;          // [0, 1)
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

void NormalStream::fill(std::span<double> out) {
  for (double& z : out) z = next();
}

namespace {

struct TrialResult {
  std::vector<double> samples;  // samples_per_trial rows of n-1 gaps
  std::vector<double> mean;
  Matrix cov;
};

TrialResult run_trial(const SparseLaplacian& lap, const PlatoonParams& platoon,
                      const NoiseParams& np, const SimConfig& cfg, std::uint64_t trial) {
  const int n = platoon.n;
  const auto pairs = static_cast<std::size_t>(n - 1);
  SimState state(n, platoon.d, cfg.delay_steps(np.tau));
  NormalStream noise(cfg.seed, trial);
  std::vector<double> xi(static_cast<std::size_t>(n));

  const auto advance = [&](long steps) {
    for (long s = 0; s < steps; ++s) {
      noise.fill(xi);
      step(state, np, lap, xi, cfg.dt);
    }
  };

  const auto samples = static_cast<std::size_t>(cfg.samples_per_trial);
  const long interval = std::max(1L, to_steps(cfg.sample_interval, cfg.dt));
  TrialResult out;
  out.samples.resize(samples * pairs);
  try {
    advance(to_steps(cfg.burn_in, cfg.dt));
    for (std::size_t s = 0; s < samples; ++s) {
      if (s > 0) advance(interval);
      const auto x = state.x();
      for (std::size_t i = 0; i < pairs; ++i) out.samples[s * pairs + i] = x[i + 1] - x[i];
    }
  } catch (const Divergence& e) {
    throw Divergence(std::string(e.what()) + " in trial " + std::to_string(trial));
  }

  out.mean.assign(pairs, 0.0);
  for (std::size_t s = 0; s < samples; ++s)
    for (std::size_t i = 0; i < pairs; ++i) out.mean[i] += out.samples[s * pairs + i];
  for (double& m : out.mean) m /= static_cast<double>(samples);
  out.cov = Matrix(pairs, pairs);
  for (std::size_t s = 0; s < samples; ++s)
    for (std::size_t i = 0; i < pairs; ++i)
      for (std::size_t j = 0; j < pairs; ++j)
        out.cov(i, j) += (out.samples[s * pairs + i] - out.mean[i]) *
                         (out.samples[s * pairs + j] - out.mean[j]);
  for (std::size_t i = 0; i < pairs; ++i)
    for (std::size_t j = 0; j < pairs; ++j) out.cov(i, j) /= static_cast<double>(samples - 1);
  return out;
}

}  // namespace

EmpiricalCovariance run(const WeightedGraph& graph, const PlatoonParams& platoon,
                        const NoiseParams& np, const SimConfig& config) {
  platoon.validate();
  np.validate();
  if (graph.size() != platoon.n)
    throw InvalidArgument("sim: graph has " + std::to_string(graph.size()) +
                          " nodes but the platoon has " + std::to_string(platoon.n));
  config.validate(np.tau);
  const Matrix lap = laplacian(graph);
  require_stable(check_platoon(spectrum(lap), np.tau, np.beta));

  const SparseLaplacian sparse(lap);
  const auto trials = static_cast<std::size_t>(config.trials);
  std::vector<TrialResult> results(trials);
  parallel_for(trials, [&](std::size_t t) {
    results[t] = run_trial(sparse, platoon, np, config, t);
  });

  const auto pairs = static_cast<std::size_t>(platoon.n - 1);
  const auto samples = static_cast<std::size_t>(config.samples_per_trial);
  EmpiricalCovariance out;
  out.sample_count = static_cast<long long>(trials * samples);
  out.mean.assign(pairs, 0.0);
  for (const auto& r : results)
    for (std::size_t s = 0; s < samples; ++s)
      for (std::size_t i = 0; i < pairs; ++i) out.mean[i] += r.samples[s * pairs + i];
  for (double& m : out.mean) m /= static_cast<double>(out.sample_count);

  out.cov = Matrix(pairs, pairs);
  for (const auto& r : results)
    for (std::size_t s = 0; s < samples; ++s)
      for (std::size_t i = 0; i < pairs; ++i)
        for (std::size_t j = 0; j < pairs; ++j)
          out.cov(i, j) += (r.samples[s * pairs + i] - out.mean[i]) *
                           (r.samples[s * pairs + j] - out.mean[j]);
  for (std::size_t i = 0; i < pairs; ++i)
    for (std::size_t j = 0; j < pairs; ++j)
      out.cov(i, j) /= static_cast<double>(out.sample_count - 1);

  // Standard errors from the spread of per-trial estimates.
  const double t_count = static_cast<double>(trials);
  out.mean_standard_errors.assign(pairs, 0.0);
  out.standard_errors = Matrix(pairs, pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    double avg = 0.0;
    for (const auto& r : results) avg += r.mean[i];
    avg /= t_count;
    double ss = 0.0;
    for (const auto& r : results) ss += (r.mean[i] - avg) * (r.mean[i] - avg);
    out.mean_standard_errors[i] = std::sqrt(ss / (t_count - 1.0) / t_count);

    for (std::size_t j = 0; j < pairs; ++j) {
      double cavg = 0.0;
      for (const auto& r : results) cavg += r.cov(i, j);
      cavg /= t_count;
      double css = 0.0;
      for (const auto& r : results) css += (r.cov(i, j) - cavg) * (r.cov(i, j) - cavg);
      out.standard_errors(i, j) = std::sqrt(css / (t_count - 1.0) / t_count);
    }
  }

  out.first_pair_samples.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) out.first_pair_samples.push_back(results[0].samples[s * pairs]);
  return out;
}

}  // namespace cascade::sim
