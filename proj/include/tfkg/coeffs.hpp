#pragma once

#include <vector>

namespace tfkg {

/// Gamma function on the positive real axis. Throws std::domain_error for x <= 0.
double gamma_fn(double x);

/// Parameters of the fractional time discretization: Caputo order alpha in (1,2),
/// uniform step tau > 0 and step count N >= 1. The shift theta = (3-alpha)/2
/// places the weighted evaluation point between grid levels.
struct FractionalParams {
  double alpha = 1.5;
  double tau = 0.01;
  int steps = 1;  // N

  double theta() const { return 0.5 * (3.0 - alpha); }
  double final_time() const { return tau * steps; }

  /// Throws std::invalid_argument unless 1 < alpha < 2, tau > 0 and steps >= 1.
  void validate() const;
};

/// Weight table of the shifted fractional-derivative discretization.
///
/// Storage is the two O(N) arrays a_l and b_l; the per-row weights
/// c_k^{(n+1)} and d_k^{(n+1)} are evaluated on demand from the three-branch
/// closed forms (rows of c differ from the previous row in one entry only,
/// so a dense table would be redundant).
///
/// Immutable after construction; safe to share between concurrent runs.
class CoefficientTable {
 public:
  explicit CoefficientTable(const FractionalParams& params);

  const FractionalParams& params() const { return params_; }
  double theta() const { return theta_; }

  /// mu = tau^(alpha-1) * Gamma(3-alpha); the common scale of the d-weights.
  double mu() const { return mu_; }

  /// a_l for 0 <= l <= N-1.
  double a(int l) const;
  /// b_l for 1 <= l <= N-1.
  double b(int l) const;

  /// c_k^{(n+1)} for 0 <= k <= n <= N-1.
  double c(int k, int n) const;
  /// d_k^{(n+1)} for 0 <= k <= n <= N-1.
  double d(int k, int n) const;

 private:
  FractionalParams params_;
  double theta_ = 0.0;
  double mu_ = 0.0;
  std::vector<double> a_;  // a_[l] = a_l, l = 0..N-1
  std::vector<double> b_;  // b_[l] = b_l, l = 1..N-1 (b_[0] unused)
};

}  // namespace tfkg
