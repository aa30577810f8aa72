#include <cmath>
#include <limits>

#include "cascade/error.hpp"
#include "cascade/graph.hpp"
#include "cascade/simulate.hpp"
#include "doctest.h"

using namespace cascade;
using namespace cascade::sim;

namespace {

std::vector<double> copy(std::span<const double> s) { return {s.begin(), s.end()}; }

// Integrates up to time t_end with step dt; the noise of each step is built
// from `fine` unit normals per base increment so runs at dt, dt/2, ... share
// one Brownian path.
std::vector<double> coupled_run(int refine, int base_steps, double base_dt) {
  const auto g = build_path(3);
  const SparseLaplacian lap(laplacian(g));
  const NoiseParams np{0.5, 0.02, 2.0};
  const double dt = base_dt / refine;
  SimState state(3, 1.0, static_cast<int>(std::lround(np.tau / dt)));
  NormalStream stream(99, 0);
  const int fine = 4;
  std::vector<double> z(3 * fine);
  std::vector<double> xi(3);
  for (int s = 0; s < base_steps; ++s) {
    stream.fill(z);
    for (int r = 0; r < refine; ++r) {
      const int chunk = fine / refine;
      for (int i = 0; i < 3; ++i) {
        double sum = 0.0;
        for (int c = 0; c < chunk; ++c) sum += z[i * fine + r * chunk + c];
        xi[i] = sum / std::sqrt(static_cast<double>(chunk));
      }
      step(state, np, lap, xi, dt);
    }
  }
  auto out = copy(state.x());
  for (double v : state.v()) out.push_back(v);
  return out;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("config defaults and validation") {
  const auto spec = spectrum(laplacian(build_path(5)));
  const NoiseParams np{0.1, 0.03, 2.0};
  const auto cfg = default_config(spec, np);
  CHECK(cfg.dt == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(cfg.delay_steps(np.tau) == 30);
  const double lambda2 = 2.0 - 2.0 * std::cos(std::numbers::pi / 5);
  CHECK(cfg.burn_in == doctest::Approx(20.0 / (2.0 * lambda2)));
  CHECK(cfg.sample_interval == doctest::Approx(4.0 / lambda2));
  CHECK_NOTHROW(cfg.validate(np.tau));

  SimConfig bad = cfg;
  bad.dt = 0.0007;
  CHECK_THROWS_AS(bad.validate(np.tau), InvalidArgument);
  bad = cfg;
  bad.burn_in = 0.1;
  CHECK_THROWS_AS(bad.validate(np.tau), InvalidArgument);
  bad = cfg;
  bad.trials = 1;
  CHECK_THROWS_AS(bad.validate(np.tau), InvalidArgument);

  // Overdamped slow mode: rate is the smaller root of s^2 + lambda s + beta lambda.
  const auto big = default_config(spectrum(laplacian(build_complete(4))), NoiseParams{1.0, 0.01, 0.1});
  const double rate = 0.5 * (4.0 - std::sqrt(16.0 - 1.6));
  CHECK(big.sample_interval == doctest::Approx(std::max(0.2, 2.0 / rate)));
  CHECK(big.dt == doctest::Approx(1e-3));
}

TEST_CASE("state starts in formation and the delay line has tau/dt + 1 slots") {
  SimState s(4, 2.5, 10);
  CHECK(s.buffer_length() == 11);
  CHECK(copy(s.x()) == std::vector<double>{2.5, 5.0, 7.5, 10.0});
  CHECK(copy(s.v()) == std::vector<double>{0, 0, 0, 0});
  CHECK(copy(s.delayed_x()) == copy(s.x()));
  CHECK(s.target() == copy(s.x()));
  CHECK_THROWS_AS(SimState(1, 1.0, 3), InvalidArgument);
  CHECK_THROWS_AS(SimState(3, 1.0, 0), InvalidArgument);
}

TEST_CASE("formation is a fixed point without noise") {
  const auto g = build_pcycle(7, 2);
  const SparseLaplacian lap(laplacian(g));
  SimState s(7, 3.0, 5);
  const std::vector<double> zero(7, 0.0);
  for (int k = 0; k < 100; ++k) step(s, NoiseParams{1.0, 0.05, 2.0}, lap, zero, 0.01);
  CHECK(copy(s.x()) == s.target());
  CHECK(copy(s.v()) == zero);
  CHECK(s.steps_taken() == 100);
}

TEST_CASE("delay line returns the state from exactly delay_steps ago") {
  const auto g = build_path(3);
  const SparseLaplacian lap(laplacian(g));
  const NoiseParams np{1.0, 0.004, 2.0};
  SimState s(3, 1.0, 4);
  NormalStream noise(5, 0);
  std::vector<std::vector<double>> history{copy(s.x())};
  std::vector<double> xi(3);
  for (int k = 1; k <= 12; ++k) {
    noise.fill(xi);
    step(s, np, lap, xi, 0.001);
    history.push_back(copy(s.x()));
    const int lag = std::max(0, k - 4);
    CHECK(copy(s.delayed_x()) == history[static_cast<std::size_t>(lag)]);
  }
}

TEST_CASE("step matches the per-vehicle feedback law") {
  const auto g = build_custom(4, {{1, 2, 1.0}, {2, 3, 0.5}, {3, 4, 2.0}, {1, 3, 0.25}});
  const SparseLaplacian lap(laplacian(g));
  const NoiseParams np{1.0, 0.002, 1.5};
  SimState s(4, 2.0, 2);
  const std::vector<double> x0{1.7, 4.4, 5.9, 8.3};
  const std::vector<double> v0{0.1, -0.2, 0.05, 0.3};
  s.set_history(x0, v0);
  const auto u = feedback_law(g, np.beta, 2.0, x0, v0);
  const std::vector<double> zero(4, 0.0);
  step(s, np, lap, zero, 0.01);
  for (int i = 0; i < 4; ++i) {
    CHECK(s.x()[i] == doctest::Approx(x0[i] + 0.01 * v0[i]));
    CHECK(s.v()[i] == doctest::Approx(v0[i] + 0.01 * u[i]).epsilon(1e-14));
  }

  // Shifting the whole platoon changes nothing.
  std::vector<double> shifted = x0;
  for (double& x : shifted) x += 123.0;
  const auto u2 = feedback_law(g, np.beta, 2.0, shifted, v0);
  for (int i = 0; i < 4; ++i) CHECK(u2[i] == doctest::Approx(u[i]).epsilon(1e-12));

  // The sparse product agrees with the dense Laplacian.
  std::vector<double> out(4);
  lap.apply(x0, out);
  const Matrix dense = laplacian(g);
  for (std::size_t i = 0; i < 4; ++i) {
    double ref = 0.0;
    for (std::size_t j = 0; j < 4; ++j) ref += dense(i, j) * x0[j];
    CHECK(out[i] == doctest::Approx(ref));
  }
}

TEST_CASE("non-finite state raises Divergence") {
  const auto g = build_path(3);
  const SparseLaplacian lap(laplacian(g));
  SimState s(3, 1.0, 1);
  const std::vector<double> huge(3, 1e308);
  s.set_history(huge, std::vector<double>{1e308, -1e308, 1e308});
  const std::vector<double> zero(3, 0.0);
  CHECK_THROWS_AS(step(s, NoiseParams{1.0, 0.01, 2.0}, lap, zero, 0.01), Divergence);
}

TEST_CASE("normal stream") {
  NormalStream a(42, 3);
  NormalStream b(42, 3);
  NormalStream c(42, 4);
  NormalStream d(43, 3);
  std::vector<double> va(1000), vb(1000), vc(1000), vd(1000);
  a.fill(va);
  b.fill(vb);
  c.fill(vc);
  d.fill(vd);
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);

  NormalStream s(1, 0);
  const int n = 400000;
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  for (int k = 0; k < n; ++k) {
    const double z = s.next();
    m1 += z;
    m2 += z * z;
    m3 += z * z * z;
    m4 += z * z * z * z;
  }
  CHECK(std::abs(m1 / n) < 0.01);
  CHECK(std::abs(m2 / n - 1.0) < 0.01);
  CHECK(std::abs(m3 / n) < 0.03);
  CHECK(std::abs(m4 / n - 3.0) < 0.06);
}

TEST_CASE("coupled noise: the scheme converges as dt is halved") {
  const double base_dt = 0.005;
  const int steps = 400;
  const auto x1 = coupled_run(1, steps, base_dt);
  const auto x2 = coupled_run(2, steps, base_dt);
  const auto x4 = coupled_run(4, steps, base_dt);
  const double e1 = distance(x1, x2);
  const double e2 = distance(x2, x4);
  CHECK(e1 > 0.0);
  CHECK(e2 < 0.75 * e1);
}

TEST_CASE("run is deterministic in the seed") {
  const auto g = build_path(4);
  const PlatoonParams p{4, 3.0};
  const NoiseParams np{0.1, 0.03, 2.0};
  SimConfig cfg;
  cfg.burn_in = 1.0;
  cfg.sample_interval = 0.2;
  cfg.samples_per_trial = 10;
  cfg.trials = 3;
  cfg.seed = 17;
  const auto a = run(g, p, np, cfg);
  const auto b = run(g, p, np, cfg);
  CHECK(a.cov == b.cov);
  CHECK(a.mean == b.mean);
  CHECK(a.standard_errors == b.standard_errors);
  CHECK(a.sample_count == 30);
  cfg.seed = 18;
  CHECK_FALSE(run(g, p, np, cfg).cov == a.cov);

  CHECK_THROWS_AS((void)run(g, PlatoonParams{5, 3.0}, np, cfg), InvalidArgument);
  CHECK_THROWS_AS((void)run(g, p, NoiseParams{0.1, 0.03, 40.0}, cfg), UnstablePlatoon);
}

TEST_CASE("thinned samples look like independent normal draws") {
  const auto g = build_path(3);
  const PlatoonParams p{3, 3.0};
  const NoiseParams np{0.1, 0.03, 2.0};
  SimConfig cfg = default_config(spectrum(laplacian(g)), np);
  cfg.samples_per_trial = 400;
  cfg.trials = 2;
  cfg.seed = 2024;
  const auto emp = run(g, p, np, cfg);
  const auto& z = emp.first_pair_samples;
  REQUIRE(z.size() == 400);

  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= z.size();
  double m2 = 0, m3 = 0, m4 = 0, lag = 0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double e = z[k] - mean;
    m2 += e * e;
    m3 += e * e * e;
    m4 += e * e * e * e;
    if (k > 0) lag += e * (z[k - 1] - mean);
  }
  const double n = static_cast<double>(z.size());
  m2 /= n;
  const double skew = m3 / n / std::pow(m2, 1.5);
  const double kurt = m4 / n / (m2 * m2);
  const double rho = lag / n / m2;
  CHECK(std::abs(mean - 3.0) < 4.0 * std::sqrt(m2 / n));
  CHECK(std::abs(skew) < 0.4);
  CHECK(std::abs(kurt - 3.0) < 0.8);
  CHECK(std::abs(rho) < 0.15);
}
