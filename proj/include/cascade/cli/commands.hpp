#pragma once

#include <cstdint>
#include <optional>
#include <ostream>

#include "cascade/cli/config.hpp"

namespace cascade::cli {

enum class RiskMethod { generic, closed_form };

void cmd_stability(const RunConfig& cfg, std::ostream& out);
void cmd_covariance(const RunConfig& cfg, std::ostream& out);
void cmd_risk_profile(const RunConfig& cfg, RiskMethod method, std::ostream& out);
void cmd_simulate(const RunConfig& cfg, std::optional<std::uint64_t> seed, std::ostream& out);
void cmd_sweep_scale(const RunConfig& cfg, int max_m, std::ostream& out);
void cmd_sweep_sparsity(const RunConfig& cfg, int m, std::optional<std::uint64_t> seed,
                        std::ostream& out);
void cmd_add_edge(const RunConfig& cfg, int pair, std::ostream& out);

/// Exit status for an exception escaping a command: 1 for invalid input,
/// 2 for numerical failures.
[[nodiscard]] int exit_code_for(const std::exception& e);

}  // namespace cascade::cli
