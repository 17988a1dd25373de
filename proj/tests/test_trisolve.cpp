#include "tfkg/trisolve.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "support/dense_solve.hpp"

using namespace tfkg;

namespace {

double residual_inf_norm(const TridiagonalSystem& sys, const std::vector<double>& x) {
  const std::size_t n = sys.size();
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double ax = sys.diag[i] * x[i];
    if (i > 0) ax += sys.lower[i] * x[i - 1];
    if (i + 1 < n) ax += sys.upper[i] * x[i + 1];
    res = std::max(res, std::abs(ax - sys.rhs[i]));
  }
  return res;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

TridiagonalSystem random_dominant(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  std::uniform_real_distribution<double> bump(0.1, 2.0);
  TridiagonalSystem sys;
  sys.lower.resize(n);
  sys.diag.resize(n);
  sys.upper.resize(n);
  sys.rhs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sys.lower[i] = i > 0 ? off(rng) : 0.0;
    sys.upper[i] = i + 1 < n ? off(rng) : 0.0;
    const double sign = (rng() & 1) ? 1.0 : -1.0;
    sys.diag[i] = sign * (std::abs(sys.lower[i]) + std::abs(sys.upper[i]) + bump(rng));
    sys.rhs[i] = off(rng);
  }
  return sys;
}

}  // namespace

TEST_CASE("identity system") {
  TridiagonalSystem sys;
  sys.lower = {0, 0, 0};
  sys.diag = {1, 1, 1};
  sys.upper = {0, 0, 0};
  sys.rhs = {3.5, -2.0, 0.25};
  const auto x = solve(sys);
  CHECK(x == sys.rhs);
}

TEST_CASE("three by three against hand computation") {
  TridiagonalSystem sys;
  sys.lower = {0, -1, -1};
  sys.diag = {2, 2, 2};
  sys.upper = {-1, -1, 0};
  sys.rhs = {1, 0, 1};
  const auto x = solve(sys);
  REQUIRE(x.size() == 3);
  for (double v : x) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("random dominant systems match the dense oracle") {
  std::mt19937 rng(99);
  for (std::size_t n : {2u, 3u, 7u, 50u, 128u, 512u}) {
    for (int rep = 0; rep < 5; ++rep) {
      const TridiagonalSystem sys = random_dominant(rng, n);
      const auto x = solve(sys);

      CHECK(residual_inf_norm(sys, x) <=
            1e-12 * (max_abs(sys.rhs) + max_abs(x)));

      std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
      for (std::size_t i = 0; i < n; ++i) {
        dense[i][i] = sys.diag[i];
        if (i > 0) dense[i][i - 1] = sys.lower[i];
        if (i + 1 < n) dense[i][i + 1] = sys.upper[i];
      }
      const auto ref = testing::dense_solve(dense, sys.rhs);
      const double scale = std::max(1e-30, max_abs(ref));
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(x[i] - ref[i]) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("near-zero pivot is rejected") {
  TridiagonalSystem sys;
  sys.lower = {0, 1};
  sys.diag = {1, 1};  // second pivot becomes exactly zero after elimination
  sys.upper = {1, 0};
  sys.rhs = {1, 1};
  CHECK_THROWS_AS(solve(sys), std::runtime_error);

  TridiagonalSystem zero_diag;
  zero_diag.lower = {0};
  zero_diag.diag = {0};
  zero_diag.upper = {0};
  zero_diag.rhs = {1};
  CHECK_THROWS_AS(solve(zero_diag), std::runtime_error);
}

TEST_CASE("length mismatch is rejected") {
  TridiagonalSystem sys;
  sys.lower = {0};
  sys.diag = {1, 1};
  sys.upper = {0, 0};
  sys.rhs = {1, 1};
  CHECK_THROWS_AS(solve(sys), std::invalid_argument);
}
