#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cascade/covariance.hpp"
#include "cascade/error.hpp"
#include "cascade/graph.hpp"
#include "cascade/risk.hpp"
#include "cascade/simulate.hpp"

namespace cascade::cli {

/// Malformed configuration, reported as "<source>:<line>: <message>".
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  [[nodiscard]] int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class GraphType { complete, path, pcycle, custom };

struct GraphSpec {
  GraphType type = GraphType::complete;
  int n = 0;
  int p = 0;                       // pcycle only
  std::vector<WeightedEdge> edges;  // custom only
};

[[nodiscard]] WeightedGraph build_graph(const GraphSpec& spec);

/// Optional overrides of the graph-derived simulation defaults.
struct SimOverrides {
  std::optional<double> dt;
  std::optional<double> burn_in;
  std::optional<double> sample_interval;
  std::optional<int> samples_per_trial;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
};

struct SparsitySettings {
  long long exact_limit = 100000;  // enumerate when a level has at most this many placements
  int samples = 10000;             // uniform draws per level otherwise
};

/// Everything one command needs, from a sectioned key = value file:
///
///   [graph]     type = complete|path|pcycle|custom, n, p, edges = [[i,j,w],...]
///   [platoon]   d (and optionally n, which must match the graph)
///   [noise]     g, tau, beta
///   [query]     epsilon, c
///   [scenario]  indices = [...], states = [...] or state = <value for every failure>
///   [sim]       dt, burn_in, sample_interval, samples_per_trial, trials, seed
///   [sparsity]  exact_limit, samples
///
/// Lines starting with '#' or ';' are comments. Node and pair indices are 1-based.
struct RunConfig {
  std::string source;
  GraphSpec graph;
  PlatoonParams platoon;
  NoiseParams noise;
  RiskQuery query;
  FailureScenario scenario;
  double failure_state = 0.0;  // distance assigned to generated failures
  SimOverrides sim;
  SparsitySettings sparsity;
};

/// Parses and validates; every problem is a ConfigError.
[[nodiscard]] RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
[[nodiscard]] RunConfig load_config(const std::string& path);

}  // namespace cascade::cli
