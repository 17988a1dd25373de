#pragma once

#include <optional>
#include <vector>

#include "tfkg/coeffs.hpp"
#include "tfkg/mesh.hpp"
#include "tfkg/problems.hpp"
#include "tfkg/scheme.hpp"

namespace tfkg {

enum class L1Nonlinearity {
  CentralIterative,  // f at the midpoint average, fixed-point iteration per step
  Lagged,            // f at the previous level, one linear solve per step
};

/// Comparison engine: L1 time discretization with Crank-Nicolson space
/// coupling, used as the baseline the main scheme is measured against.
struct L1Config {
  FractionalParams params;
  SpaceGrid grid;
  ProblemSpec problem;
  L1Nonlinearity mode = L1Nonlinearity::CentralIterative;
  double fp_tol = 1e-12;  // max-norm gap between successive iterates
  int fp_max_iter = 200;

  void validate() const;
};

/// L1 quadrature weights a_k = (k+1)^(2-alpha) - k^(2-alpha), k = 0..N-1.
/// Positive and strictly decreasing.
std::vector<double> l1_weights(double alpha, int steps);

struct L1StepReport {
  int n = 0;
  int iterations = 1;         // sweeps of the fixed-point loop (1 in lagged mode)
  double residual_inf = 0.0;  // residual of the accepted level in the mode's equation
};

struct L1RunResult {
  std::vector<GridFunction> history;
  std::optional<double> e2;
  std::vector<L1StepReport> reports;
  double max_residual = 0.0;
  double integration_seconds = 0.0;
};

/// Advance the state one L1 step. CentralIterative mode sweeps until the
/// iterate gap drops below fp_tol and throws std::runtime_error (reporting the
/// gap) if fp_max_iter sweeps do not get there.
L1StepReport l1_step(const L1Config& cfg, SchemeState& state);

L1RunResult l1_run(const L1Config& cfg);

/// Residual of the L1 discrete equation at accepted level `level` (>= 1),
/// with the nonlinear term approximated per cfg.mode.
double l1_residual_inf(const L1Config& cfg, const SchemeState& state, int level);

}  // namespace tfkg
