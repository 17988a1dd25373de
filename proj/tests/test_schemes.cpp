#include "tfkg/scheme.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"

using namespace tfkg;

namespace {

constexpr double kPi = std::numbers::pi;

SchemeConfig config_for(const ProblemSpec& problem, double alpha, int steps, int m,
                        SchemeVariant variant = SchemeVariant::StandardSecondOrder) {
  return SchemeConfig{FractionalParams{alpha, problem.final_time / steps, steps},
                      SpaceGrid(problem.left, problem.right, m), problem, variant};
}

ProblemSpec linear_fixture(ScalarFn phi, ScalarFn phi_xx, ScalarFn psi, ScalarFn psi_xx,
                           SpaceTimeFn source) {
  ProblemSpec spec;
  spec.alpha = 1.5;
  spec.f = [](double) { return 0.0; };
  spec.phi = std::move(phi);
  spec.phi_xx = std::move(phi_xx);
  spec.psi = std::move(psi);
  spec.psi_xx = std::move(psi_xx);
  spec.source = std::move(source);
  return spec;
}

}  // namespace

TEST_CASE("config validation") {
  const ProblemSpec prob = manufactured_case(1, 1.5);
  SchemeConfig bad_time{FractionalParams{1.5, 0.3, 5}, SpaceGrid(0, 1, 10), prob,
                        SchemeVariant::StandardSecondOrder};
  CHECK_THROWS_AS(bad_time.validate(), std::invalid_argument);

  SchemeConfig bad_alpha{FractionalParams{1.4, 0.1, 10}, SpaceGrid(0, 1, 10), prob,
                         SchemeVariant::StandardSecondOrder};
  CHECK_THROWS_AS(bad_alpha.validate(), std::invalid_argument);

  SchemeConfig bad_grid{FractionalParams{1.5, 0.1, 10}, SpaceGrid(0, 2, 10), prob,
                        SchemeVariant::StandardSecondOrder};
  CHECK_THROWS_AS(bad_grid.validate(), std::invalid_argument);
}

TEST_CASE("zero problem stays identically zero") {
  for (SchemeVariant variant :
       {SchemeVariant::StandardSecondOrder, SchemeVariant::CompactFourthOrder}) {
    const ProblemSpec prob = zero_problem(1.3);
    const SchemeConfig cfg = config_for(prob, 1.3, 12, 16, variant);
    const RunResult r = run(cfg);
    REQUIRE(r.history.size() == 13);
    for (const GridFunction& level : r.history) {
      for (int i = 0; i < level.size(); ++i) CHECK(level[i] == 0.0);
    }
    CHECK(r.max_residual == 0.0);
    CHECK(r.e2.value() == 0.0);
  }
}

TEST_CASE("first step closed form under constant forcing") {
  // phi = psi = 0, f = 0, p = 1: every interior value equals
  // tau/(2 d_0^(1)) = tau^alpha Gamma(3-alpha) / (2 theta^(2-alpha)).
  const double alpha = 1.7;
  ProblemSpec prob = linear_fixture(
      [](double) { return 0.0; }, [](double) { return 0.0; },
      [](double) { return 0.0; }, [](double) { return 0.0; },
      [](double, double) { return 1.0; });
  prob.alpha = alpha;
  const SchemeConfig cfg = config_for(prob, alpha, 10, 8);

  GridFunction u0(cfg.grid), psi(cfg.grid);
  SchemeState state(u0, psi);
  const GridFunction u1 = first_step(cfg, state);

  const double theta = 0.5 * (3.0 - alpha);
  const double expected = std::pow(0.1, alpha) * gamma_fn(3.0 - alpha) /
                          (2.0 * std::pow(theta, 2.0 - alpha));
  for (int i = 1; i < 8; ++i) CHECK(u1[i] == doctest::Approx(expected).epsilon(1e-13));
  CHECK(u1[0] == 0.0);
  CHECK(u1[8] == 0.0);
}

TEST_CASE("first step error decays at least cubically") {
  const double alpha = 1.8;
  auto first_error = [&](const ProblemSpec& prob, int steps) {
    const SchemeConfig cfg = config_for(prob, alpha, steps, 1000);
    GridFunction u0 = GridFunction::sample(cfg.grid, prob.phi);
    u0[0] = 0.0;
    u0[1000] = 0.0;
    SchemeState state(u0, GridFunction::sample(cfg.grid, prob.psi));
    GridFunction u1 = first_step(cfg, state);
    for (int i = 0; i <= 1000; ++i) {
      u1[i] -= prob.exact(cfg.grid.node(i), cfg.params.tau);
    }
    return norm_l2(u1);
  };

  // Exact solution sin(pi x)(t^3 + 1): the cubic start keeps the generic
  // tau^3 first-level error alive, so halving tau divides it by about 8.
  ProblemSpec cubic;
  cubic.alpha = alpha;
  cubic.f = [](double) { return 0.0; };
  cubic.exact = [](double x, double t) {
    return std::sin(kPi * x) * (t * t * t + 1.0);
  };
  const double caputo_scale = 6.0 / gamma_fn(4.0 - alpha);
  cubic.source = [caputo_scale, alpha](double x, double t) {
    return (caputo_scale * std::pow(t, 3.0 - alpha) +
            kPi * kPi * (t * t * t + 1.0)) * std::sin(kPi * x);
  };
  cubic.phi = [](double x) { return std::sin(kPi * x); };
  cubic.psi = [](double) { return 0.0; };
  cubic.phi_xx = [](double x) { return -kPi * kPi * std::sin(kPi * x); };
  cubic.psi_xx = [](double) { return 0.0; };

  const double cubic_ratio = first_error(cubic, 20) / first_error(cubic, 40);
  CHECK(cubic_ratio > 6.8);
  CHECK(cubic_ratio < 9.2);

  // The quartic benchmark start is flatter, so the decay is at least cubic.
  const ProblemSpec quartic = manufactured_case(2, alpha);
  const double quartic_ratio = first_error(quartic, 20) / first_error(quartic, 40);
  CHECK(quartic_ratio > 6.5);
}

TEST_CASE("assembled systems are strictly diagonally dominant") {
  const ProblemSpec prob = manufactured_case(1, 1.5);
  for (SchemeVariant variant :
       {SchemeVariant::StandardSecondOrder, SchemeVariant::CompactFourthOrder}) {
    const SchemeConfig cfg = config_for(prob, 1.5, 50, 50, variant);
    GridFunction u0 = GridFunction::sample(cfg.grid, prob.phi);
    u0[0] = 0.0;
    u0[50] = 0.0;
    SchemeState state(u0, GridFunction::sample(cfg.grid, prob.psi));
    state.append(first_step(cfg, state));
    for (int n = 1; n < 50; ++n) {
      const TridiagonalSystem sys = assemble_step(cfg, state);
      for (std::size_t i = 0; i < sys.size(); ++i) {
        const double off = (i > 0 ? std::abs(sys.lower[i]) : 0.0) +
                           (i + 1 < sys.size() ? std::abs(sys.upper[i]) : 0.0);
        CHECK(std::abs(sys.diag[i]) > off);
      }
      step(cfg, state);
    }
  }
}

TEST_CASE("every accepted level satisfies the displayed equations") {
  for (SchemeVariant variant :
       {SchemeVariant::StandardSecondOrder, SchemeVariant::CompactFourthOrder}) {
    const ProblemSpec prob = manufactured_case(1, 1.2);
    const SchemeConfig cfg = config_for(prob, 1.2, 20, 1000, variant);
    const RunResult r = run(cfg);
    double p_scale = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      p_scale = std::max(p_scale, std::abs(prob.source(cfg.grid.node(i), 1.0)));
    }
    CHECK(r.max_residual <= 1e-10 * std::max(1.0, p_scale));
  }
}

TEST_CASE("residual oracle on randomized small configurations") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> alpha_dist(1.05, 1.95);
  for (int trial = 0; trial < 12; ++trial) {
    const double alpha = alpha_dist(rng);
    const int m = 8 + static_cast<int>(rng() % 57);   // up to 64
    const int n = 4 + static_cast<int>(rng() % 61);   // up to 64
    const int which = 1 + static_cast<int>(rng() % 3);
    const SchemeVariant variant = (rng() & 1) ? SchemeVariant::CompactFourthOrder
                                              : SchemeVariant::StandardSecondOrder;
    const ProblemSpec prob = manufactured_case(which, alpha);
    const RunResult r = run(config_for(prob, alpha, n, m, variant));
    double p_scale = 0.0;
    for (int i = 0; i <= m; ++i) {
      for (int lvl = 0; lvl <= n; ++lvl) {
        p_scale = std::max(p_scale, std::abs(prob.source(i / double(m),
                                                         lvl * prob.final_time / n)));
      }
    }
    CHECK(r.max_residual <= 1e-10 * std::max(1.0, p_scale));
  }
}

TEST_CASE("solution map is additive when f vanishes") {
  ProblemSpec s1 = linear_fixture(
      [](double x) { return std::sin(kPi * x); },
      [](double x) { return -kPi * kPi * std::sin(kPi * x); },
      [](double) { return 0.0; }, [](double) { return 0.0; },
      [](double, double) { return 0.0; });
  ProblemSpec s2 = linear_fixture(
      [](double) { return 0.0; }, [](double) { return 0.0; },
      [](double x) { return std::sin(2.0 * kPi * x); },
      [](double x) { return -4.0 * kPi * kPi * std::sin(2.0 * kPi * x); },
      [](double x, double t) { return x * (1.0 - x) * std::exp(-t); });
  ProblemSpec sum = linear_fixture(
      [&](double x) { return s1.phi(x) + s2.phi(x); },
      [&](double x) { return s1.phi_xx(x) + s2.phi_xx(x); },
      [&](double x) { return s1.psi(x) + s2.psi(x); },
      [&](double x) { return s1.psi_xx(x) + s2.psi_xx(x); },
      [&](double x, double t) { return s1.source(x, t) + s2.source(x, t); });

  for (SchemeVariant variant :
       {SchemeVariant::StandardSecondOrder, SchemeVariant::CompactFourthOrder}) {
    const RunResult r1 = run(config_for(s1, 1.5, 32, 64, variant));
    const RunResult r2 = run(config_for(s2, 1.5, 32, 64, variant));
    const RunResult rs = run(config_for(sum, 1.5, 32, 64, variant));
    for (std::size_t lvl = 0; lvl < rs.history.size(); ++lvl) {
      for (int i = 0; i <= 64; ++i) {
        CHECK(std::abs(rs.history[lvl][i] - r1.history[lvl][i] - r2.history[lvl][i]) <=
              1e-11);
      }
    }
  }
}

TEST_CASE("temporal convergence is second order at modest resolution") {
  for (SchemeVariant variant :
       {SchemeVariant::StandardSecondOrder, SchemeVariant::CompactFourthOrder}) {
    const ProblemSpec prob = manufactured_case(2, 1.5);
    const double e_coarse = run(config_for(prob, 1.5, 10, 400, variant)).e2.value();
    const double e_fine = run(config_for(prob, 1.5, 20, 400, variant)).e2.value();
    const double rate = std::log2(e_coarse / e_fine);
    CHECK(rate > 1.7);
    CHECK(rate < 2.3);
  }
}

TEST_CASE("step reports carry level index and residual") {
  const ProblemSpec prob = manufactured_case(2, 1.4);
  const RunResult r = run(config_for(prob, 1.4, 8, 32));
  REQUIRE(r.reports.size() == 8);
  for (std::size_t k = 0; k < r.reports.size(); ++k) {
    CHECK(r.reports[k].n == static_cast<int>(k) + 1);
    CHECK(r.reports[k].residual_inf >= 0.0);
  }
}
