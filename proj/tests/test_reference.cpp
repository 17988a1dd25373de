#include "tfkg/l1_scheme.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"

using namespace tfkg;

namespace {

L1Config config_for(const ProblemSpec& problem, double alpha, int steps, int m,
                    L1Nonlinearity mode = L1Nonlinearity::CentralIterative) {
  return L1Config{FractionalParams{alpha, problem.final_time / steps, steps},
                  SpaceGrid(problem.left, problem.right, m), problem, mode};
}

double source_scale(const ProblemSpec& prob, int m, int n) {
  double s = 0.0;
  for (int i = 0; i <= m; ++i) {
    for (int lvl = 0; lvl <= n; ++lvl) {
      s = std::max(s, std::abs(prob.source(i / double(m), lvl / double(n))));
    }
  }
  return s;
}

}  // namespace

TEST_CASE("l1 weights") {
  for (double alpha : {1.1, 1.5, 1.9}) {
    const auto a = l1_weights(alpha, 64);
    CHECK(a[0] == 1.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k] > 0.0);
      if (k > 0) CHECK(a[k] < a[k - 1]);
      sum += a[k];
    }
    // Telescoping.
    CHECK(sum == doctest::Approx(std::pow(64.0, 2.0 - alpha)).epsilon(1e-13));
  }
  CHECK(l1_weights(1.5, 4)[1] ==
        doctest::Approx(0.4142135623730950488).epsilon(1e-15));
  CHECK_THROWS_AS(l1_weights(2.3, 4), std::invalid_argument);
}

TEST_CASE("validation") {
  const ProblemSpec prob = manufactured_case(2, 1.5);
  L1Config bad = config_for(prob, 1.5, 10, 16);
  bad.fp_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = config_for(prob, 1.5, 10, 16);
  bad.fp_max_iter = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("zero problem converges in one sweep") {
  for (L1Nonlinearity mode : {L1Nonlinearity::CentralIterative, L1Nonlinearity::Lagged}) {
    const ProblemSpec prob = zero_problem(1.6);
    const L1RunResult r = l1_run(config_for(prob, 1.6, 10, 16, mode));
    CHECK(r.e2.value() == 0.0);
    CHECK(r.max_residual == 0.0);
    for (const L1StepReport& rep : r.reports) CHECK(rep.iterations == 1);
  }
}

TEST_CASE("accepted levels satisfy the discrete equation") {
  for (L1Nonlinearity mode : {L1Nonlinearity::CentralIterative, L1Nonlinearity::Lagged}) {
    const ProblemSpec prob = manufactured_case(3, 1.3);
    const L1RunResult r = l1_run(config_for(prob, 1.3, 24, 48, mode));
    CHECK(r.max_residual <= 1e-9 * std::max(1.0, source_scale(prob, 48, 24)));
  }
}

TEST_CASE("fixed-point iteration reports non-convergence") {
  const ProblemSpec prob = manufactured_case(1, 1.5);
  L1Config cfg = config_for(prob, 1.5, 8, 16);
  cfg.fp_max_iter = 1;
  cfg.fp_tol = 1e-15;
  CHECK_THROWS_AS(l1_run(cfg), std::runtime_error);
}

TEST_CASE("regression pins on the sin-Gordon benchmark") {
  // Frozen from this implementation; guards against drift.
  const ProblemSpec prob = manufactured_case(2, 1.8);
  const double central20 =
      l1_run(config_for(prob, 1.8, 20, 1000)).e2.value();
  CHECK(central20 == doctest::Approx(1.4776011777e-02).epsilon(1e-8));
  const double lagged20 =
      l1_run(config_for(prob, 1.8, 20, 1000, L1Nonlinearity::Lagged)).e2.value();
  CHECK(lagged20 == doctest::Approx(1.5987803600e-02).epsilon(1e-8));
}

TEST_CASE("temporal orders: central approaches 3 - alpha, lagged stays below") {
  const double alpha = 1.8;
  const ProblemSpec prob = manufactured_case(2, alpha);

  const double c80 = l1_run(config_for(prob, alpha, 80, 1000)).e2.value();
  const double c160 = l1_run(config_for(prob, alpha, 160, 1000)).e2.value();
  const double central_rate = std::log2(c80 / c160);
  CHECK(std::abs(central_rate - (3.0 - alpha)) <= 0.15);
  CHECK(central_rate <= 2.0 * (3.0 - alpha));

  const double l80 =
      l1_run(config_for(prob, alpha, 80, 1000, L1Nonlinearity::Lagged)).e2.value();
  const double l160 =
      l1_run(config_for(prob, alpha, 160, 1000, L1Nonlinearity::Lagged)).e2.value();
  const double lagged_rate = std::log2(l80 / l160);
  CHECK(lagged_rate <= central_rate + 0.05);
}
