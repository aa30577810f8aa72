#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cascade/cli/commands.hpp"
#include "cascade/cli/config.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help,
                      CommonArgs& args) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", args.config, "Run configuration file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", args.out, "Output CSV path (default: stdout)");
  sub->add_option("--seed", args.seed, "Random seed, overrides [sim] seed");
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Value-at-risk of cascading collisions in a noisy, delayed vehicle platoon.\n"
      "Units follow the model: tau in s, beta in 1/s, g in length/s^(3/2), d in length.\n"
      "CASCADE_RISK_THREADS caps the number of worker threads."};
  app.require_subcommand(1);

  CommonArgs args;
  std::string method = "generic";
  int max_m = 0;
  int m = 0;
  int pair = 0;

  auto* stability = add_command(app, "stability", "Per-mode stability table", args);
  auto* covariance = add_command(app, "covariance", "Steady-state covariance of pair distances", args);
  auto* profile = add_command(app, "risk-profile", "Risk of every pair given the failure scenario", args);
  profile->add_option("--method", method, "generic or closed-form (complete graphs)")
      ->check(CLI::IsMember({"generic", "closed-form"}));
  auto* simulate = add_command(app, "simulate", "Monte Carlo check of the analytic covariance", args);
  auto* scale = add_command(app, "sweep-scale", "Risk profiles for failures at pairs 1..m", args);
  scale->add_option("--max-m", max_m, "Largest number of failures")->required();
  auto* sparsity = add_command(app, "sweep-sparsity", "Average risk by sparsity of m failures", args);
  sparsity->add_option("--m", m, "Number of failures")->required();
  auto* edge = add_command(app, "add-edge", "Risk of one pair after linking it to each vehicle", args);
  edge->add_option("--pair", pair, "Pair whose risk is tracked")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    using namespace cascade::cli;
    const RunConfig cfg = load_config(args.config);
    std::ostringstream buf;
    if (*stability) {
      cmd_stability(cfg, buf);
    } else if (*covariance) {
      cmd_covariance(cfg, buf);
    } else if (*profile) {
      cmd_risk_profile(cfg, method == "closed-form" ? RiskMethod::closed_form : RiskMethod::generic, buf);
    } else if (*simulate) {
      cmd_simulate(cfg, args.seed, buf);
    } else if (*scale) {
      cmd_sweep_scale(cfg, max_m, buf);
    } else if (*sparsity) {
      cmd_sweep_sparsity(cfg, m, args.seed, buf);
    } else if (*edge) {
      cmd_add_edge(cfg, pair, buf);
    }

    if (args.out.empty()) {
      std::cout << buf.str() << std::flush;
    } else {
      std::ofstream out(args.out, std::ios::binary);
      out << buf.str();
      if (!out) {
        std::cerr << "error: cannot write " << args.out << '\n';
        return 1;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cascade::cli::exit_code_for(e);
  }
  return 0;
}
