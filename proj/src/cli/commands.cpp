#include "cascade/cli/commands.hpp"

#include <cmath>
#include <string>

#include "cascade/cli/csv.hpp"
#include "cascade/cli/experiments.hpp"
#include "cascade/closed_form.hpp"
#include "cascade/simulate.hpp"
#include "cascade/stability.hpp"

namespace cascade::cli {

namespace {

struct Analysis {
  WeightedGraph graph;
  LaplacianSpectrum spec;
  StabilityReport report;
};

Analysis analyse(const RunConfig& cfg) {
  WeightedGraph graph = build_graph(cfg.graph);
  LaplacianSpectrum spec = spectrum(laplacian(graph));
  StabilityReport report = check_platoon(spec, cfg.noise.tau, cfg.noise.beta);
  return {std::move(graph), std::move(spec), std::move(report)};
}

CovarianceMatrix stable_covariance(const RunConfig& cfg) {
  const Analysis a = analyse(cfg);
  require_stable(a.report);
  return steady_state_covariance(a.spec, cfg.noise);
}

void write_risk(CsvWriter& w, const std::optional<RiskResult>& risk) {
  if (risk) {
    w.field(risk->value).field(to_string(risk->branch));
  } else {
    w.empty().field("error");
  }
}

const char* graph_name(GraphType t) {
  switch (t) {
    case GraphType::complete:
      return "complete";
    case GraphType::path:
      return "path";
    case GraphType::pcycle:
      return "pcycle";
    case GraphType::custom:
      return "custom";
  }
  return "unknown";
}

}  // namespace

void cmd_stability(const RunConfig& cfg, std::ostream& out) {
  const Analysis a = analyse(cfg);
  CsvWriter w(out, "stability", {"k", "lambda", "s1", "s2", "bound", "margin"});
  for (const auto& m : a.report.modes) {
    w.field(m.k).field(m.lambda).field(m.s1).field(m.s2).field(m.bound).field(m.margin);
    w.end_row();
  }
  w.comment(std::string("stable=") + (a.report.stable ? "true" : "false"));
}

void cmd_covariance(const RunConfig& cfg, std::ostream& out) {
  const CovarianceMatrix sigma = stable_covariance(cfg);
  CsvWriter w(out, "covariance", {"i", "j", "sigma_ij"});
  for (int i = 1; i <= sigma.dim(); ++i) {
    for (int j = 1; j <= sigma.dim(); ++j) {
      w.field(i).field(j).field(sigma(i, j));
      w.end_row();
    }
  }
}

void cmd_risk_profile(const RunConfig& cfg, RiskMethod method, std::ostream& out) {
  const int n = cfg.graph.n;
  std::vector<ProfileEntry> profile;
  std::vector<double> pair_sd(static_cast<std::size_t>(n - 1));

  if (method == RiskMethod::closed_form) {
    if (cfg.graph.type != GraphType::complete) {
      throw InvalidArgument(std::string("risk-profile: the closed-form method applies to complete graphs only; "
                                        "use --method generic for a ") +
                            graph_name(cfg.graph.type) + " graph");
    }
    require_stable(analyse(cfg).report);
    const double sigma_c = complete_graph_variance(n, cfg.noise);
    const double sd = std::sqrt(sigma_c);
    pair_sd.assign(pair_sd.size(), sd);
    for (int j = 1; j <= n - 1; ++j) {
      ProfileEntry e;
      e.j = j;
      e.is_failed = cfg.scenario.contains(j);
      if (e.is_failed) {
        e.risk = RiskResult::zero();
      } else {
        const auto adj = closed_form::classify(j, cfg.scenario, n);
        e.cond = closed_form::case_stats(adj, sd, sigma_c, cfg.platoon.d);
        e.risk = var_risk(*e.cond, cfg.platoon.d, cfg.query);
      }
      profile.push_back(std::move(e));
    }
  } else {
    const CovarianceMatrix sigma = stable_covariance(cfg);
    for (int j = 1; j <= n - 1; ++j) pair_sd[j - 1] = std::sqrt(sigma.variance(j));
    profile = risk_profile(sigma, cfg.scenario, cfg.platoon.d, cfg.query);
  }

  CsvWriter w(out, "risk-profile",
              {"j", "risk", "branch", "mu_tilde", "sigma_tilde", "is_failed", "naive_risk"});
  for (const auto& e : profile) {
    w.field(e.j);
    write_risk(w, e.risk);
    if (e.cond) {
      w.field(e.cond->mu).field(e.cond->sigma);
    } else {
      w.empty().empty();
    }
    w.field(e.is_failed ? 1 : 0);
    const RiskResult naive = naive_risk(pair_sd[e.j - 1], cfg.platoon.d, cfg.query);
    w.field(naive.value);
    w.end_row();
  }
  for (const auto& e : profile) {
    if (!e.error.empty()) w.comment("j=" + std::to_string(e.j) + ": " + e.error);
  }
}

void cmd_simulate(const RunConfig& cfg, std::optional<std::uint64_t> seed, std::ostream& out) {
  const Analysis a = analyse(cfg);
  require_stable(a.report);
  const CovarianceMatrix sigma = steady_state_covariance(a.spec, cfg.noise);

  sim::SimConfig sc = sim::default_config(a.spec, cfg.noise);
  if (cfg.sim.dt) sc.dt = *cfg.sim.dt;
  if (cfg.sim.burn_in) sc.burn_in = *cfg.sim.burn_in;
  if (cfg.sim.sample_interval) sc.sample_interval = *cfg.sim.sample_interval;
  if (cfg.sim.samples_per_trial) sc.samples_per_trial = *cfg.sim.samples_per_trial;
  if (cfg.sim.trials) sc.trials = *cfg.sim.trials;
  if (cfg.sim.seed) sc.seed = *cfg.sim.seed;
  if (seed) sc.seed = *seed;

  const sim::EmpiricalCovariance emp = sim::run(a.graph, cfg.platoon, cfg.noise, sc);

  CsvWriter w(out, "simulate", {"i", "j", "analytic_sigma", "empirical_sigma", "se", "z_score"});
  w.comment("dt=" + format_number(sc.dt) + " burn_in=" + format_number(sc.burn_in) +
            " sample_interval=" + format_number(sc.sample_interval) +
            " samples_per_trial=" + std::to_string(sc.samples_per_trial) +
            " trials=" + std::to_string(sc.trials) + " seed=" + std::to_string(sc.seed));
  double max_abs_z = 0.0;
  for (int i = 1; i <= sigma.dim(); ++i) {
    for (int j = i; j <= sigma.dim(); ++j) {
      const double analytic = sigma(i, j);
      const double empirical = emp.cov(i - 1, j - 1);
      const double se = emp.standard_errors(i - 1, j - 1);
      const double z = (empirical - analytic) / se;
      max_abs_z = std::max(max_abs_z, std::abs(z));
      w.field(i).field(j).field(analytic).field(empirical).field(se).field(z);
      w.end_row();
    }
  }
  out << "max_abs_z=" << format_number(max_abs_z) << '\n';
}

void cmd_sweep_scale(const RunConfig& cfg, int max_m, std::ostream& out) {
  const CovarianceMatrix sigma = stable_covariance(cfg);
  const auto sweep = sweep_scale(sigma, max_m, cfg.failure_state, cfg.platoon.d, cfg.query);
  CsvWriter w(out, "sweep-scale", {"m", "j", "risk", "branch", "is_failed"});
  for (std::size_t m = 0; m < sweep.size(); ++m) {
    for (const auto& e : sweep[m]) {
      w.field(static_cast<int>(m)).field(e.j);
      write_risk(w, e.risk);
      w.field(e.is_failed ? 1 : 0);
      w.end_row();
    }
  }
}

void cmd_sweep_sparsity(const RunConfig& cfg, int m, std::optional<std::uint64_t> seed,
                        std::ostream& out) {
  const CovarianceMatrix sigma = stable_covariance(cfg);
  const std::uint64_t s = seed ? *seed : cfg.sim.seed.value_or(1);
  const auto levels =
      sweep_sparsity(sigma, m, cfg.failure_state, cfg.platoon.d, cfg.query, cfg.sparsity, s);
  CsvWriter w(out, "sweep-sparsity", {"s", "avg_risk", "n_patterns", "exact_flag", "inf_fraction"});
  for (const auto& level : levels) {
    w.field(level.s).field(level.avg_risk).field(level.n_patterns).field(level.exact ? 1 : 0);
    w.field(level.inf_fraction);
    w.end_row();
  }
  for (const auto& level : levels) {
    if (level.failed_patterns > 0) {
      w.comment("s=" + std::to_string(level.s) + ": " + std::to_string(level.failed_patterns) +
                " placements could not be conditioned and were skipped");
    }
  }
}

void cmd_add_edge(const RunConfig& cfg, int pair, std::ostream& out) {
  const WeightedGraph graph = build_graph(cfg.graph);
  const auto rows = add_edge_study(graph, cfg.noise, cfg.scenario, pair, cfg.platoon.d, cfg.query);
  CsvWriter w(out, "add-edge", {"target", "risk", "branch", "stable_flag"});
  for (const auto& row : rows) {
    if (row.target == 0) {
      w.field("baseline");
    } else {
      w.field(row.target);
    }
    if (!row.stable) {
      w.empty().field("unstable");
    } else {
      write_risk(w, row.risk);
    }
    w.field(row.stable ? 1 : 0);
    w.end_row();
  }
  for (const auto& row : rows) {
    if (!row.error.empty()) w.comment("target=" + std::to_string(row.target) + ": " + row.error);
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr) return 1;
  return 2;
}

}  // namespace cascade::cli
