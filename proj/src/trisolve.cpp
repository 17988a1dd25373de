#include "tfkg/trisolve.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tfkg {

namespace {

// Forward elimination factors shared by the solve and the refinement pass.
struct ThomasFactors {
  std::vector<double> c_prime;  // scaled upper diagonal
  std::vector<double> inv_piv;  // reciprocal pivots
};

ThomasFactors factor(const TridiagonalSystem& sys) {
  const std::size_t n = sys.size();
  ThomasFactors f;
  f.c_prime.resize(n);
  f.inv_piv.resize(n);

  auto check_pivot = [&](double piv, std::size_t i) {
    const double scale = std::abs(sys.diag[i]) +
                         (i > 0 ? std::abs(sys.lower[i]) : 0.0) +
                         (i + 1 < n ? std::abs(sys.upper[i]) : 0.0);
    if (!(std::abs(piv) > 1e-14 * scale) || !std::isfinite(piv)) {
      throw std::runtime_error("tridiagonal solve: near-zero pivot at row " +
                               std::to_string(i));
    }
  };

  check_pivot(sys.diag[0], 0);
  f.inv_piv[0] = 1.0 / sys.diag[0];
  f.c_prime[0] = sys.upper[0] * f.inv_piv[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double piv = sys.diag[i] - sys.lower[i] * f.c_prime[i - 1];
    check_pivot(piv, i);
    f.inv_piv[i] = 1.0 / piv;
    f.c_prime[i] = sys.upper[i] * f.inv_piv[i];
  }
  return f;
}

std::vector<double> substitute(const TridiagonalSystem& sys, const ThomasFactors& f,
                               const std::vector<double>& rhs) {
  const std::size_t n = rhs.size();
  std::vector<double> x(n);
  x[0] = rhs[0] * f.inv_piv[0];
  for (std::size_t i = 1; i < n; ++i) {
    x[i] = (rhs[i] - sys.lower[i] * x[i - 1]) * f.inv_piv[i];
  }
  for (std::size_t i = n - 1; i > 0; --i) {
    x[i - 1] -= f.c_prime[i - 1] * x[i];
  }
  return x;
}

}  // namespace

std::vector<double> solve(const TridiagonalSystem& sys) {
  const std::size_t n = sys.size();
  if (n == 0) return {};
  if (sys.lower.size() != n || sys.upper.size() != n || sys.rhs.size() != n) {
    throw std::invalid_argument("TridiagonalSystem: array lengths disagree");
  }

  const ThomasFactors f = factor(sys);
  std::vector<double> x = substitute(sys, f, sys.rhs);

  // One refinement pass. The schemes assemble rows whose diagonal grows like
  // tau^(-alpha), where the plain substitution leaves the solution a couple of
  // ulp off and the equation residual correspondingly large; the correction
  // brings the solution back to rounding level.
  std::vector<double> residual(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ax = sys.diag[i] * x[i];
    if (i > 0) ax += sys.lower[i] * x[i - 1];
    if (i + 1 < n) ax += sys.upper[i] * x[i + 1];
    residual[i] = sys.rhs[i] - ax;
  }
  const std::vector<double> correction = substitute(sys, f, residual);
  for (std::size_t i = 0; i < n; ++i) x[i] += correction[i];
  return x;
}

}  // namespace tfkg
