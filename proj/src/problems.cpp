#include "tfkg/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tfkg/coeffs.hpp"

namespace tfkg {

namespace {
constexpr double kPi = std::numbers::pi;
}

ProblemSpec manufactured_problem(ScalarFn f, double alpha) {
  FractionalParams{alpha, 1.0, 1}.validate();

  ProblemSpec spec;
  spec.left = 0.0;
  spec.right = 1.0;
  spec.final_time = 1.0;
  spec.alpha = alpha;
  spec.f = f;

  const double caputo_scale = 24.0 / gamma_fn(5.0 - alpha);
  auto exact = [](double x, double t) {
    return std::sin(kPi * x) * (t * t * t * t + 1.0);
  };
  spec.source = [caputo_scale, alpha, exact, f](double x, double t) {
    const double t4 = t * t * t * t;
    return (caputo_scale * std::pow(t, 4.0 - alpha) + kPi * kPi * (t4 + 1.0)) *
               std::sin(kPi * x) +
           f(exact(x, t));
  };
  spec.exact = exact;

  spec.phi = [](double x) { return std::sin(kPi * x); };
  spec.psi = [](double) { return 0.0; };
  spec.phi_xx = [](double x) { return -kPi * kPi * std::sin(kPi * x); };
  spec.psi_xx = [](double) { return 0.0; };
  return spec;
}

ProblemSpec manufactured_case(int which, double alpha) {
  switch (which) {
    case 1:
      return manufactured_problem([](double u) { return 2.0 * u * u * u; }, alpha);
    case 2:
      return manufactured_problem([](double u) { return std::sin(u); }, alpha);
    case 3:
      return manufactured_problem([](double u) { return std::sqrt(u * u + 5.0); },
                                  alpha);
    default:
      throw std::invalid_argument(
          "manufactured_case: case id must be 1, 2 or 3, got " + std::to_string(which));
  }
}

ProblemSpec manufactured_case3_half_quadratic(double alpha) {
  return manufactured_problem([](double u) { return 0.5 * (u * u + 5.0); }, alpha);
}

ProblemSpec zero_problem(double alpha) {
  ProblemSpec spec;
  spec.alpha = alpha;
  spec.f = [](double) { return 0.0; };
  spec.source = [](double, double) { return 0.0; };
  spec.phi = [](double) { return 0.0; };
  spec.psi = [](double) { return 0.0; };
  spec.phi_xx = [](double) { return 0.0; };
  spec.psi_xx = [](double) { return 0.0; };
  spec.exact = [](double, double) { return 0.0; };
  return spec;
}

}  // namespace tfkg
