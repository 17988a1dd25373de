#include "tfkg/coeffs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tfkg {

double gamma_fn(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("gamma_fn: argument must be positive, got " +
                            std::to_string(x));
  }
  return std::tgamma(x);
}

void FractionalParams::validate() const {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw std::invalid_argument("FractionalParams: alpha must lie in (1,2), got " +
                                std::to_string(alpha));
  }
  if (!(tau > 0.0)) {
    throw std::invalid_argument("FractionalParams: tau must be positive");
  }
  if (steps < 1) {
    throw std::invalid_argument("FractionalParams: steps must be >= 1");
  }
}

namespace {

// (l + theta)^p via exp(p*log(l+theta)); the l = 0 base is handled by the
// caller so the log argument is always >= theta > 1/2.
double shifted_pow(double l, double theta, double p) {
  return std::exp(p * std::log(l + theta));
}

}  // namespace

CoefficientTable::CoefficientTable(const FractionalParams& params)
    : params_(params) {
  params_.validate();
  theta_ = params_.theta();
  const double alpha = params_.alpha;
  const int n = params_.steps;
  mu_ = std::pow(params_.tau, alpha - 1.0) * gamma_fn(3.0 - alpha);

  const double p2 = 2.0 - alpha;
  const double p3 = 3.0 - alpha;

  a_.resize(n);
  a_[0] = std::pow(theta_, p2);
  for (int l = 1; l < n; ++l) {
    a_[l] = shifted_pow(l, theta_, p2) - shifted_pow(l - 1.0, theta_, p2);
  }

  b_.resize(n);
  for (int l = 1; l < n; ++l) {
    const double lo = (l == 1) ? std::pow(theta_, p3) : shifted_pow(l - 1.0, theta_, p3);
    const double lo2 = (l == 1) ? a_[0] : shifted_pow(l - 1.0, theta_, p2);
    b_[l] = (shifted_pow(l, theta_, p3) - lo) / p3 -
            0.5 * (shifted_pow(l, theta_, p2) + lo2);
  }
}

double CoefficientTable::a(int l) const {
  if (l < 0 || l >= static_cast<int>(a_.size())) {
    throw std::out_of_range("CoefficientTable::a: index " + std::to_string(l));
  }
  return a_[l];
}

double CoefficientTable::b(int l) const {
  if (l < 1 || l >= params_.steps) {
    throw std::out_of_range("CoefficientTable::b: index " + std::to_string(l));
  }
  return b_[l];
}

double CoefficientTable::c(int k, int n) const {
  if (n < 0 || n >= params_.steps || k < 0 || k > n) {
    throw std::out_of_range("CoefficientTable::c: (k,n) = (" + std::to_string(k) +
                            "," + std::to_string(n) + ")");
  }
  if (n == 0) return a_[0];
  if (k == 0) return a_[0] + b_[1];
  if (k == n) return a_[n] - b_[n];
  return a_[k] + b_[k + 1] - b_[k];
}

double CoefficientTable::d(int k, int n) const {
  if (n < 0 || n >= params_.steps || k < 0 || k > n) {
    throw std::out_of_range("CoefficientTable::d: (k,n) = (" + std::to_string(k) +
                            "," + std::to_string(n) + ")");
  }
  if (n == 0) return a_[0] / mu_;
  if (k == n) return (c(n, n) - theta_ / (1.0 - theta_) * b_[n]) / mu_;
  return c(k, n) / mu_;
}

}  // namespace tfkg
