#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "cascade/cli/commands.hpp"
#include "cascade/cli/config.hpp"
#include "cascade/cli/csv.hpp"
#include "cascade/cli/experiments.hpp"
#include "cascade/stability.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cascade;
using namespace cascade::cli;

namespace {

const char* kComplete = R"(
[graph]
type = complete
n = 50

[platoon]
d = 3

[noise]
g = 10
tau = 0.03
beta = 0.005

[query]
epsilon = 0.1
c = 2

[scenario]
indices = [23, 24, 25, 26, 27]
state = 0
)";

std::string path_config(int n, const std::string& scenario) {
  return "[graph]\ntype = path\nn = " + std::to_string(n) +
         "\n[platoon]\nd = 3\n[noise]\ng = 0.1\ntau = 0.03\nbeta = 2\n[query]\nepsilon = 0.1\nc = 2\n" +
         scenario;
}

std::string pcycle_config(int n, int p, const std::string& scenario) {
  return "[graph]\ntype = pcycle\nn = " + std::to_string(n) + "\np = " + std::to_string(p) +
         "\n[platoon]\nd = 3\n[noise]\ng = 0.1\ntau = 0.01\nbeta = 2\n[query]\nepsilon = 0.1\nc = 2\n" +
         scenario;
}

// Data rows of a CSV, skipping '#' lines and the header.
std::vector<std::vector<std::string>> rows_of(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

double num(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

int config_error_line(const std::string& text) {
  try {
    (void)parse_config(text, "t.ini");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("t.ini", 0) == 0);
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 2000; ++k) {
    const double x = std::ldexp(u(rng), static_cast<int>(u(rng)));
    CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  }
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("csv writer") {
  std::ostringstream out;
  CsvWriter w(out, "demo", {"a", "b"});
  w.field(1).field(0.5);
  w.end_row();
  w.empty().field("x");
  w.comment("note");
  CHECK(out.str() == "# schema=demo/v1\na,b\n1,0.5\n,x\n# note\n");
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(kComplete);
  CHECK(cfg.graph.type == GraphType::complete);
  CHECK(cfg.graph.n == 50);
  CHECK(cfg.platoon.n == 50);
  CHECK(cfg.platoon.d == 3.0);
  CHECK(cfg.noise.g == 10.0);
  CHECK(cfg.noise.tau == 0.03);
  CHECK(cfg.noise.beta == 0.005);
  CHECK(cfg.query.epsilon == 0.1);
  CHECK(cfg.query.c == 2.0);
  CHECK(cfg.scenario.indices() == std::vector<int>{23, 24, 25, 26, 27});
  CHECK(cfg.scenario.states() == std::vector<double>(5, 0.0));
  CHECK_FALSE(cfg.sim.seed.has_value());

  const auto custom = parse_config(
      "; comment\n[graph]\ntype = custom\nn = 3\nedges = [[1, 2], [2, 3, 0.5]]\n"
      "[platoon]\nd = 1\n[noise]\ng = 1\ntau = 0.01\nbeta = 1\n"
      "[scenario]\nindices = [2]\nstates = [0.25]\n[sim]\nseed = 18446744073709551615\ntrials = 4\n"
      "[sparsity]\nexact_limit = 10\n");
  CHECK(custom.graph.edges.size() == 2);
  CHECK(custom.graph.edges[1].weight == 0.5);
  CHECK(build_graph(custom.graph).weight(2, 3) == 0.5);
  CHECK(custom.scenario.states() == std::vector<double>{0.25});
  CHECK(*custom.sim.seed == 18446744073709551615ull);
  CHECK(*custom.sim.trials == 4);
  CHECK(custom.sparsity.exact_limit == 10);
  CHECK(custom.query.epsilon == RiskQuery{}.epsilon);

  const auto pc = parse_config(pcycle_config(20, 3, ""));
  CHECK(pc.graph.p == 3);
  CHECK(pc.scenario.empty());
}

TEST_CASE("config errors carry the line number") {
  const std::string base = "[graph]\ntype = path\nn = 5\n[platoon]\nd = 3\n[noise]\ng = 0.1\ntau = 0.03\nbeta = 2\n";
  CHECK(config_error_line(base + "[query]\nepsilon = 1.5\n") == 11);
  CHECK(config_error_line(base + "[query]\nc = abc\n") == 11);
  CHECK(config_error_line(base + "[query]\ncolour = 2\n") == 11);
  CHECK(config_error_line(base + "[bogus]\n") == 10);
  CHECK(config_error_line(base + "just text\n") == 10);
  CHECK(config_error_line(base + "[scenario]\nindices = [3, 2]\n") == 11);
  CHECK(config_error_line(base + "[scenario]\nindices = [1, 9]\n") == 11);
  CHECK(config_error_line(base + "[scenario]\nindices = [1, 2]\nstates = [0]\n") == 12);
  CHECK(config_error_line(base + "[scenario]\nindices = 1, 2\n") == 11);
  CHECK(config_error_line(base + "[sim]\ndt = 0.0007\n") == 11);
  CHECK(config_error_line(base + "[sim]\nseed = -4\n") == 11);
  CHECK(config_error_line("[graph]\ntype = ring\nn = 5\n") == 2);
  CHECK(config_error_line("[graph]\ntype = path\nn = 1\n") == 3);
  CHECK(config_error_line("[graph]\ntype = pcycle\nn = 10\np = 5\n") == 2);
  CHECK(config_error_line("[graph]\ntype = path\nn = 5\nn = 6\n") == 4);
  CHECK(config_error_line("[graph]\ntype = custom\nn = 4\nedges = [[1, 2]]\n") == 2);
  CHECK(config_error_line("[graph]\ntype = path\nn = 5\n[platoon]\nd = -1\n") == 5);
  CHECK(config_error_line("[graph]\ntype = path\nn = 5\n[platoon]\nd = 2\nn = 6\n") == 6);
  CHECK(config_error_line("[graph]\ntype = path\nn = 5\n[platoon]\nd = 2\n[noise]\ng = 1\ntau = 0.03\n") == 0);
  CHECK(config_error_line("[graph\n") == 1);
  CHECK_THROWS_AS((void)load_config("/nonexistent/x.ini"), ConfigError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ConfigError("x", 1, "bad")) == 1);
  CHECK(exit_code_for(UnstablePlatoon("bad")) == 1);
  CHECK(exit_code_for(NearBoundary("bad")) == 2);
  CHECK(exit_code_for(IllConditioned("bad")) == 2);
  CHECK(exit_code_for(Divergence("bad")) == 2);
}

TEST_CASE("stability and covariance commands") {
  const auto cfg = parse_config(kComplete);
  std::ostringstream st;
  cmd_stability(cfg, st);
  CHECK(st.str().rfind("# schema=stability/v1\nk,lambda,s1,s2,bound,margin\n", 0) == 0);
  CHECK(st.str().find("# stable=true\n") != std::string::npos);
  CHECK(rows_of(st.str()).size() == 49);

  std::ostringstream cv;
  cmd_covariance(cfg, cv);
  CHECK(cv.str().rfind("# schema=covariance/v1\ni,j,sigma_ij\n", 0) == 0);
  const auto rows = rows_of(cv.str());
  REQUIRE(rows.size() == 49 * 49);
  const double sc = complete_graph_variance(50, cfg.noise);
  for (const auto& r : rows) {
    const int i = std::stoi(r[0]);
    const int j = std::stoi(r[1]);
    const double v = num(r[2]);
    if (std::abs(i - j) > 1) CHECK(std::abs(v) < 1e-12 * sc);
    if (i == j) CHECK(v == doctest::Approx(sc).epsilon(1e-12));
    if (std::abs(i - j) == 1) CHECK(v == doctest::Approx(-sc / 2).epsilon(1e-12));
  }

  auto unstable = cfg;
  unstable.noise.tau = 0.04;
  std::ostringstream us;
  cmd_stability(unstable, us);
  CHECK(us.str().find("# stable=false") != std::string::npos);
  std::ostringstream ignored;
  CHECK_THROWS_AS(cmd_covariance(unstable, ignored), UnstablePlatoon);
  CHECK_THROWS_AS(cmd_risk_profile(unstable, RiskMethod::generic, ignored), UnstablePlatoon);
}

TEST_CASE("risk profile on the complete graph") {
  const auto cfg = parse_config(kComplete);
  std::ostringstream gen, cf;
  cmd_risk_profile(cfg, RiskMethod::generic, gen);
  cmd_risk_profile(cfg, RiskMethod::closed_form, cf);
  CHECK(gen.str().rfind("# schema=risk-profile/v1\nj,risk,branch,mu_tilde,sigma_tilde,is_failed,naive_risk\n", 0) == 0);
  const auto g = rows_of(gen.str());
  const auto c = rows_of(cf.str());
  REQUIRE(g.size() == 49);
  REQUIRE(c.size() == 49);
  for (std::size_t k = 0; k < 49; ++k) {
    const int j = static_cast<int>(k) + 1;
    CHECK(g[k][1] == c[k][1]);
    CHECK(g[k][2] == c[k][2]);
    CHECK(g[k][5] == (j >= 23 && j <= 27 ? "1" : "0"));
    if (j >= 23 && j <= 27) continue;
    CHECK(std::abs(num(g[k][3]) - num(c[k][3])) < 1e-9);
    CHECK(std::abs(num(g[k][4]) - num(c[k][4])) < 1e-9);
    if (j != 22 && j != 28) CHECK(g[k][1] == g[k][6]);
  }

  auto empty = cfg;
  empty.scenario = FailureScenario();
  std::ostringstream e;
  cmd_risk_profile(empty, RiskMethod::generic, e);
  for (const auto& r : rows_of(e.str())) CHECK(r[1] == r[6]);
}

TEST_CASE("closed form on a finite-risk complete graph matches generic") {
  // Isolated failures observed far beyond d pull their neighbours' means into
  // the finite-risk band; one run of two and one surrounded pair add variety.
  auto cfg = parse_config(kComplete);
  cfg.noise.g = 1.0;
  std::vector<int> idx;
  std::vector<double> st;
  for (int k = 3; k <= 48; k += 3) {
    idx.push_back(k);
    st.push_back(5.6 + 0.15 * (k % 16));
  }
  idx.insert(std::upper_bound(idx.begin(), idx.end(), 16), 16);
  st.insert(st.begin() + 5, 7.0);
  const FailureScenario scenario(idx, st);
  cfg.scenario = scenario;
  std::ostringstream gen, cf;
  cmd_risk_profile(cfg, RiskMethod::generic, gen);
  cmd_risk_profile(cfg, RiskMethod::closed_form, cf);
  const auto g = rows_of(gen.str());
  const auto c = rows_of(cf.str());
  int finite = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(g[k][2] == c[k][2]);
    if (g[k][2] == "finite") {
      ++finite;
      CHECK(std::abs(num(g[k][1]) - num(c[k][1])) < 1e-9);
    }
  }
  CHECK(finite > 10);
}

TEST_CASE("closed form refuses other graphs") {
  const auto cfg = parse_config(path_config(10, ""));
  std::ostringstream out;
  try {
    cmd_risk_profile(cfg, RiskMethod::closed_form, out);
    FAIL("expected refusal");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("--method generic") != std::string::npos);
  }
}

TEST_CASE("path profile is finite and varies near the failures") {
  const auto cfg = parse_config(path_config(50, "[scenario]\nindices = [32, 33, 34, 35, 36]\n"));
  std::ostringstream out;
  cmd_risk_profile(cfg, RiskMethod::generic, out);
  const auto rows = rows_of(out.str());
  std::vector<double> near;
  for (const auto& r : rows) {
    const int j = std::stoi(r[0]);
    CHECK(r[2] != "infinite");
    CHECK(r[2] != "error");
    if (r[5] == "1") continue;
    const double ref = oracle::var_bisection(num(r[3]), num(r[4]), 3.0, 2.0, 0.1);
    CHECK(num(r[1]) == doctest::Approx(ref).epsilon(1e-8));
    if (j >= 25 && j <= 43) near.push_back(num(r[1]));
  }
  CHECK(*std::max_element(near.begin(), near.end()) > *std::min_element(near.begin(), near.end()) + 1.0);
}

TEST_CASE("sweep-scale") {
  const auto cfg = parse_config(kComplete);
  std::ostringstream out;
  cmd_sweep_scale(cfg, 20, out);
  const auto rows = rows_of(out.str());
  CHECK(rows.size() == 21 * 49);
  const auto sigma = complete_graph_covariance(50, cfg.noise);
  const auto naive = naive_risk(std::sqrt(sigma.variance(1)), 3.0, cfg.query);
  for (const auto& r : rows) {
    const int m = std::stoi(r[0]);
    const int j = std::stoi(r[1]);
    CHECK(r[4] == (j <= m ? "1" : "0"));
    if (j >= m + 2 || m == 0) CHECK(num(r[2]) == naive.value);
  }

  std::ostringstream bad;
  CHECK_THROWS_AS(cmd_sweep_scale(cfg, 49, bad), InvalidArgument);
}

TEST_CASE("sweep-scale on a 5-cycle: risk next to the failures does not grow with m") {
  // Reproduction check on a finite-risk variant (failed pairs observed at 1.1 d).
  const auto cfg = parse_config(pcycle_config(50, 5, "[scenario]\nstate = 3.3\n"));
  const auto sigma = steady_state_covariance(spectrum(laplacian(build_graph(cfg.graph))), cfg.noise);
  for (double state : {0.0, 3.3}) {
    const auto sweep = sweep_scale(sigma, 20, state, 3.0, cfg.query);
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= 20; ++m) {
      const auto& e = sweep[static_cast<std::size_t>(m)][static_cast<std::size_t>(m)];
      REQUIRE(e.risk.has_value());
      CHECK(e.risk->value <= prev);
      prev = e.risk->value;
    }
  }
}

TEST_CASE("placement counts") {
  CHECK(placement_count(9, 5, 0) == 5);
  CHECK(placement_count(9, 5, 1) == 4 * 4);
  CHECK(placement_count(9, 5, 4) == 35);
  CHECK(placement_count(9, 5, 5) == 0);
  CHECK(placement_count(9, 1, 0) == 9);
  CHECK(placement_count(9, 1, 1) == 0);
  CHECK(placement_count(49, 5, 10) == 286 * 35);
  CHECK(placement_count(200, 60, 60) == 1LL << 62);

  SparsityPattern p{{1, 0, 1, 1, 0, 0, 1}};
  CHECK(p.sparsity() == 3);
  CHECK(p.failures() == 4);
  CHECK(p.place(5) == std::vector<int>{5, 7, 8, 11});
}

TEST_CASE("sparsity aggregation on hand-built 6-vehicle cases") {
  const NoiseParams np{0.1, 0.03, 2.0};
  const auto sigma = steady_state_covariance(spectrum(laplacian(build_path(6))), np);
  const RiskQuery q{0.1, 2.0};
  // Every placement of m = 2 failures among 5 pairs, by sparsity.
  const std::vector<std::vector<std::vector<int>>> by_level = {
      {{1, 2}, {2, 3}, {3, 4}, {4, 5}}, {{1, 3}, {2, 4}, {3, 5}}, {{1, 4}, {2, 5}}, {{1, 5}}};
  for (double state : {0.0, 1.5, 3.0}) {
    const auto levels = sweep_sparsity(sigma, 2, state, 3.0, q, SparsitySettings{}, 1);
    REQUIRE(levels.size() == 4);
    for (std::size_t s = 0; s < 4; ++s) {
      double sum = 0.0;
      int finite = 0;
      int inf = 0;
      for (const auto& idx : by_level[s]) {
        const auto prof = risk_profile(sigma, FailureScenario::uniform(idx, state), 3.0, q);
        bool any_inf = false;
        double total = 0.0;
        int count = 0;
        for (const auto& e : prof) {
          if (e.is_failed) continue;
          any_inf = any_inf || e.risk->is_infinite();
          total += e.risk->value;
          ++count;
        }
        if (any_inf) {
          ++inf;
        } else {
          sum += total / count;
          ++finite;
        }
      }
      CAPTURE(state);
      CAPTURE(s);
      CHECK(levels[s].s == static_cast<int>(s));
      CHECK(levels[s].exact);
      CHECK(levels[s].n_patterns == static_cast<long long>(by_level[s].size()));
      CHECK(levels[s].inf_fraction == doctest::Approx(double(inf) / by_level[s].size()));
      if (finite > 0) {
        CHECK(levels[s].avg_risk == doctest::Approx(sum / finite).epsilon(1e-14));
      } else {
        CHECK(std::isinf(levels[s].avg_risk));
      }
    }
  }
}

TEST_CASE("sparsity sweep: exact at m = 5, n = 10 and sampled levels are seeded") {
  const auto cfg = parse_config(path_config(10, "[scenario]\nstate = 3.3\n"));
  const auto sigma = steady_state_covariance(spectrum(laplacian(build_graph(cfg.graph))), cfg.noise);
  const auto levels = sweep_sparsity(sigma, 5, 3.3, 3.0, cfg.query, SparsitySettings{}, 1);
  REQUIRE(levels.size() == 5);
  CHECK(levels[0].n_patterns == 5);
  for (const auto& l : levels) {
    CHECK(l.exact);
    CHECK(l.n_patterns == placement_count(9, 5, l.s));
  }

  const auto big = parse_config(path_config(14, "[scenario]\nstate = 1\n"));
  const auto sig14 = steady_state_covariance(spectrum(laplacian(build_graph(big.graph))), big.noise);
  const auto exact = sweep_sparsity(sig14, 3, 1.0, 3.0, big.query, SparsitySettings{}, 1);
  const SparsitySettings sampled{0, 3000};
  const auto a = sweep_sparsity(sig14, 3, 1.0, 3.0, big.query, sampled, 5);
  const auto b = sweep_sparsity(sig14, 3, 1.0, 3.0, big.query, sampled, 5);
  const auto c = sweep_sparsity(sig14, 3, 1.0, 3.0, big.query, sampled, 6);
  REQUIRE(a.size() == exact.size());
  bool differs = false;
  for (std::size_t s = 0; s < a.size(); ++s) {
    CHECK_FALSE(a[s].exact);
    CHECK(a[s].n_patterns == 3000);
    CHECK(a[s].avg_risk == b[s].avg_risk);
    differs = differs || a[s].avg_risk != c[s].avg_risk;
    // Sampling is uniform over placements, so it tracks the exact average.
    CHECK(a[s].avg_risk == doctest::Approx(exact[s].avg_risk).epsilon(0.05));
  }
  CHECK(differs);

  CHECK_THROWS_AS((void)sweep_sparsity(sigma, 9, 0.0, 3.0, cfg.query, SparsitySettings{}, 1), InvalidArgument);
  CHECK_THROWS_AS((void)sweep_sparsity(sigma, 0, 0.0, 3.0, cfg.query, SparsitySettings{}, 1), InvalidArgument);
}

TEST_CASE("sweep-sparsity command output") {
  const auto cfg = parse_config(path_config(10, "[scenario]\nstate = 1\n"));
  std::ostringstream a, b;
  cmd_sweep_sparsity(cfg, 5, std::nullopt, a);
  cmd_sweep_sparsity(cfg, 5, std::nullopt, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("# schema=sweep-sparsity/v1\ns,avg_risk,n_patterns,exact_flag,inf_fraction\n", 0) == 0);
  const auto rows = rows_of(a.str());
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][2] == "5");
  CHECK(rows[0][3] == "1");
}

TEST_CASE("add-edge study") {
  const auto cfg = parse_config(path_config(50, "[scenario]\nindices = [32, 33, 34, 35, 36]\n"));
  std::ostringstream out;
  cmd_add_edge(cfg, 25, out);
  CHECK(out.str().rfind("# schema=add-edge/v1\ntarget,risk,branch,stable_flag\n", 0) == 0);
  const auto rows = rows_of(out.str());
  REQUIRE(rows.size() == 1 + 48);
  CHECK(rows[0][0] == "baseline");

  std::ostringstream prof;
  cmd_risk_profile(cfg, RiskMethod::generic, prof);
  const auto p = rows_of(prof.str());
  CHECK(rows[0][1] == p[24][1]);

  const double baseline = num(rows[0][1]);
  CHECK(baseline > 0.0);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const int t = std::stoi(rows[k][0]);
    CHECK(t != 25);
    CHECK(t != 26);
    CHECK(rows[k][3] == "1");
    // Links to vehicles ahead of the collision block lower the risk.
    if (t < 32) CHECK(num(rows[k][1]) < baseline);
  }

  std::ostringstream bad;
  CHECK_THROWS_AS(cmd_add_edge(cfg, 33, bad), InvalidArgument);
  CHECK_THROWS_AS(cmd_add_edge(cfg, 50, bad), InvalidArgument);
}

TEST_CASE("add-edge on a complete graph changes nothing") {
  auto cfg = parse_config(kComplete);
  cfg.noise.g = 1.0;
  const auto rows = add_edge_study(build_graph(cfg.graph), cfg.noise, cfg.scenario, 10, 3.0, cfg.query);
  REQUIRE(rows.size() == 49);
  for (const auto& r : rows) {
    CHECK(r.stable);
    REQUIRE(r.risk.has_value());
    CHECK(r.risk->value == rows[0].risk->value);
  }
}

TEST_CASE("add-edge reports unstable augmentations") {
  // Extra links raise lambda_max; with a long delay this leaves the region.
  auto cfg = parse_config(path_config(8, ""));
  cfg.noise.tau = 0.39;
  cfg.noise.beta = 0.1;
  const auto graph = build_graph(cfg.graph);
  REQUIRE(check_platoon(spectrum(laplacian(graph)), cfg.noise.tau, cfg.noise.beta).stable);
  const auto rows = add_edge_study(graph, cfg.noise, cfg.scenario, 4, 3.0, cfg.query);
  int unstable = 0;
  for (const auto& r : rows) {
    if (!r.stable) {
      ++unstable;
      CHECK_FALSE(r.risk.has_value());
    }
  }
  CHECK(unstable > 0);
  std::ostringstream out;
  cmd_add_edge(cfg, 4, out);
  CHECK(out.str().find(",unstable,0") != std::string::npos);
}

TEST_CASE("simulate command") {
  auto cfg = parse_config(path_config(4, "[sim]\nburn_in = 2\nsample_interval = 0.5\nsamples_per_trial = 20\ntrials = 4\nseed = 3\n"));
  std::ostringstream a, b, c;
  cmd_simulate(cfg, std::nullopt, a);
  cmd_simulate(cfg, std::nullopt, b);
  cmd_simulate(cfg, 4, c);
  CHECK(a.str() == b.str());
  CHECK(a.str() != c.str());
  CHECK(a.str().rfind("# schema=simulate/v1\ni,j,analytic_sigma,empirical_sigma,se,z_score\n", 0) == 0);
  CHECK(a.str().find("\nmax_abs_z=") != std::string::npos);
  int rows = 0;
  std::istringstream in(a.str());
  std::string line;
  while (std::getline(in, line)) rows += line[0] >= '1' && line[0] <= '9';
  CHECK(rows == 6);
}
