#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "cascade/covariance.hpp"
#include "cascade/graph.hpp"
#include "cascade/matrix.hpp"

namespace cascade::sim {

struct SimConfig {
  double dt = 1e-3;
  double burn_in = 10.0;
  double sample_interval = 1.0;
  int samples_per_trial = 200;
  int trials = 64;
  std::uint64_t seed = 1;

  /// Throws InvalidArgument on non-positive sizes, burn_in < 10 tau, or when
  /// tau is not an integer multiple of dt (relative mismatch > 1e-9).
  void validate(double tau) const;
  /// Number of dt steps spanning the delay.
  [[nodiscard]] int delay_steps(double tau) const;
};

/// Defaults derived from the graph: burn_in = max(10 tau, 20 / (beta lambda_2)),
/// sample_interval = max(20 tau, 2 / slowest modal decay rate) of the
/// delay-free mode polynomial s^2 + lambda s + beta lambda.
[[nodiscard]] SimConfig default_config(const LaplacianSpectrum& spec, const NoiseParams& np);

/// Laplacian in compressed row form, for the per-step product.
class SparseLaplacian {
 public:
  explicit SparseLaplacian(const Matrix& laplacian);
  [[nodiscard]] int size() const noexcept { return n_; }
  /// out = L * in
  void apply(std::span<const double> in, std::span<double> out) const;

 private:
  int n_ = 0;
  std::vector<std::size_t> row_start_;
  std::vector<int> col_;
  std::vector<double> val_;
};

/// Positions, velocities and the delay line of one platoon trajectory.
///
/// The delay line holds the last delay_steps + 1 states; the oldest entry is
/// the state tau seconds ago. It starts filled with the target formation
/// x = r = [d, 2d, ..., nd], v = 0.
class SimState {
 public:
  SimState(int n, double d, int delay_steps);

  [[nodiscard]] int size() const noexcept { return n_; }
  [[nodiscard]] std::span<const double> x() const { return current(0); }
  [[nodiscard]] std::span<const double> v() const { return current(1); }
  [[nodiscard]] std::span<const double> delayed_x() const { return oldest(0); }
  [[nodiscard]] std::span<const double> delayed_v() const { return oldest(1); }
  [[nodiscard]] const std::vector<double>& target() const noexcept { return r_; }
  [[nodiscard]] std::size_t buffer_length() const noexcept { return slots_; }
  [[nodiscard]] std::uint64_t steps_taken() const noexcept { return steps_; }

  /// Overwrites the whole history with a constant state.
  void set_history(std::span<const double> x, std::span<const double> v);

 private:
  friend void step(SimState&, const NoiseParams&, const SparseLaplacian&,
                   std::span<const double>, double);

  [[nodiscard]] std::span<const double> current(int which) const;
  [[nodiscard]] std::span<const double> oldest(int which) const;

  int n_;
  std::size_t slots_;
  std::size_t head_ = 0;  // slot of the current state
  std::vector<double> ring_;  // slots_ * 2n: [x | v] per slot
  std::vector<double> r_;
  std::vector<double> work_;
  std::uint64_t steps_ = 0;
};

/// Euler-Maruyama step of dx = v dt, dv = -L v(t-tau) dt - beta L (x(t-tau) - r) dt + g dW
/// with `noise` holding n standard normals. Throws Divergence (with the step
/// index) if the new state is not finite.
void step(SimState& state, const NoiseParams& np, const SparseLaplacian& lap,
          std::span<const double> noise, double dt);

/// Feedback acceleration of every vehicle written from the per-vehicle sums
/// u_i = sum_j k_ij (v_j - v_i) + beta sum_j k_ij (x_j - x_i - (j - i) d).
[[nodiscard]] std::vector<double> feedback_law(const WeightedGraph& g, double beta, double d,
                                               std::span<const double> x,
                                               std::span<const double> v);

/// Deterministic per-trial normal stream (mt19937_64 + Box-Muller) seeded from
/// (seed, trial).
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t trial);
  double next();
  void fill(std::span<double> out);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct EmpiricalCovariance {
  std::vector<double> mean;       // n-1
  std::vector<double> mean_standard_errors;
  Matrix cov;                     // pooled over all samples
  Matrix standard_errors;         // between-trial SE of per-trial covariances
  long long sample_count = 0;
  std::vector<double> first_pair_samples;  // d_1 of trial 0, in time order
};

/// Monte Carlo estimate of the steady-state gap statistics. Trials run in
/// parallel and are combined in trial order, so output is bitwise identical
/// for a given seed. Throws UnstablePlatoon if the platoon is not stable.
[[nodiscard]] EmpiricalCovariance run(const WeightedGraph& graph, const PlatoonParams& platoon,
                                      const NoiseParams& np, const SimConfig& config);

}  // namespace cascade::sim
