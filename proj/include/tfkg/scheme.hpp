#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "tfkg/coeffs.hpp"
#include "tfkg/mesh.hpp"
#include "tfkg/problems.hpp"
#include "tfkg/trisolve.hpp"

namespace tfkg {

enum class SchemeVariant {
  StandardSecondOrder,   // second order in time and space
  CompactFourthOrder,    // second order in time, fourth order in space
};

struct SchemeConfig {
  FractionalParams params;
  SpaceGrid grid;
  ProblemSpec problem;
  SchemeVariant variant = SchemeVariant::StandardSecondOrder;

  /// Throws std::invalid_argument if tau*N != T, the alphas disagree, or the
  /// grid does not span the problem domain.
  void validate() const;
};

/// Mutable state of a time integration: the full solution history u^0..u^n
/// (every level is retained because the fractional time sum reaches back to
/// t = 0) plus the initial velocity. The weighted velocity levels consumed by
/// the implicit step are cached alongside; they are derived data, rebuilt
/// from the history on demand.
class SchemeState {
 public:
  SchemeState(GridFunction u0, GridFunction psi);

  const std::vector<GridFunction>& history() const { return history_; }
  const GridFunction& level(int n) const { return history_[n]; }
  const GridFunction& current() const { return history_.back(); }
  const GridFunction& psi() const { return psi_; }

  /// Index n of the newest accepted level.
  int step_index() const { return static_cast<int>(history_.size()) - 1; }

  void append(GridFunction u);

  /// Weighted velocity level k (0 <= k <= n); lazily extended from history.
  const GridFunction& velocity_level(double theta, double tau, int k);

 private:
  std::vector<GridFunction> history_;
  GridFunction psi_;
  // Cache of weighted velocity levels; a deque so that lazily appending one
  // level never invalidates references handed out for earlier levels.
  std::deque<GridFunction> vbar_;
};

struct StepReport {
  int n = 0;                  // index of the accepted level
  double residual_inf = 0.0;  // interior max-norm residual of the discrete equation
  double assembly_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct RunResult {
  std::vector<GridFunction> history;
  std::optional<double> e2;  // max over levels of ||u^n - exact||, when exact is known
  std::vector<StepReport> reports;
  double max_residual = 0.0;
  double integration_seconds = 0.0;  // time stepping only, coefficient build excluded
};

/// Explicit first level:
///   u^1 = phi + tau*psi + tau/(2 d_0^(1)) * [phi_xx + theta*tau*psi_xx
///                                            - f(phi + theta*tau*psi) + p(., theta*tau)]
/// on interior nodes, zero at the boundary. Both variants share it.
GridFunction first_step(const SchemeConfig& cfg, SchemeState& state);

/// Implicit system for the step increment u^(n+1) - u^n, n >= 1. The matrix
/// is exactly the one obtained by collecting the new-level terms of the
/// discrete equation; posing the right-hand side in increment form keeps its
/// entries at level-difference scale, which the residual contract needs at
/// fine tau. See scheme.cpp for the coefficient derivation; correctness is
/// cross-checked at runtime by residual_inf().
TridiagonalSystem assemble_step(const SchemeConfig& cfg, SchemeState& state);

/// Advance one implicit step: assemble, solve, append, and report the
/// independently evaluated residual of the accepted level.
StepReport step(const SchemeConfig& cfg, SchemeState& state);

/// Full integration from t = 0 to t = T.
RunResult run(const SchemeConfig& cfg);

/// Interior max-norm residual of the discrete equation at accepted level
/// `level` (>= 1), evaluated directly from the raw history: the time side is
/// re-accumulated term by term as a weighted sum of first differences of the
/// velocity levels, and compared against the spatial side. Independent of the
/// solver path in assemble_step.
double residual_inf(const SchemeConfig& cfg, const SchemeState& state, int level);

}  // namespace tfkg
