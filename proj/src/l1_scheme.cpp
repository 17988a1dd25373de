#include "tfkg/l1_scheme.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tfkg/trisolve.hpp"

namespace tfkg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Known side of the level-(n+1) equation, everything except the nonlinear
// term: (1/mu) [a_0 u^n / tau + sum_{k=1}^{n-1} (a_{n-k-1} - a_{n-k}) dt u^{k+1/2}
// + a_psi psi] + (1/2) dxx u^n + p(., t_{n+1/2}). The weight on psi is a_{n-1}
// for n >= 1; the empty-history step keeps the only consistent weight a_0.
GridFunction l1_known_rhs(const L1Config& cfg, const std::vector<double>& a,
                          const SchemeState& state) {
  const int n = state.step_index();
  const double tau = cfg.params.tau;
  const double mu = std::pow(tau, cfg.params.alpha - 1.0) *
                    gamma_fn(3.0 - cfg.params.alpha);
  const SpaceGrid& grid = cfg.grid;
  const int m = grid.intervals();

  GridFunction rhs(grid);
  const auto& u = state.history();
  for (int k = 1; k <= n - 1; ++k) {
    const double w = (a[n - k - 1] - a[n - k]) / (mu * tau);
    for (int i = 0; i <= m; ++i) rhs[i] += w * (u[k + 1][i] - u[k][i]);
  }
  const double a_psi = (n >= 1) ? a[n - 1] : a[0];
  const double t_mid = (n + 0.5) * tau;
  const GridFunction lap_un = delta_x2(u[n]);
  for (int i = 0; i <= m; ++i) {
    rhs[i] += (a[0] / (mu * tau)) * u[n][i] + (a_psi / mu) * state.psi()[i] +
              0.5 * lap_un[i] + cfg.problem.source(grid.node(i), t_mid);
  }
  return rhs;
}

// One sweep: assemble the full step system with the nonlinear term frozen at
// `guess` and solve it.
GridFunction l1_sweep(const L1Config& cfg, const std::vector<double>& a,
                      const SchemeState& state, const GridFunction& guess) {
  const int n = state.step_index();
  const double tau = cfg.params.tau;
  const double mu = std::pow(tau, cfg.params.alpha - 1.0) *
                    gamma_fn(3.0 - cfg.params.alpha);
  const SpaceGrid& grid = cfg.grid;
  const int m = grid.intervals();
  const double h2 = grid.spacing() * grid.spacing();

  const GridFunction known = l1_known_rhs(cfg, a, state);
  const GridFunction& un = state.level(n);

  TridiagonalSystem sys;
  sys.lower.assign(m - 1, -0.5 / h2);
  sys.diag.assign(m - 1, a[0] / (mu * tau) + 1.0 / h2);
  sys.upper.assign(m - 1, -0.5 / h2);
  sys.rhs.assign(m - 1, 0.0);
  for (int i = 1; i < m; ++i) {
    const double f_mid = (cfg.mode == L1Nonlinearity::CentralIterative)
                             ? 0.5 * (cfg.problem.f(guess[i]) + cfg.problem.f(un[i]))
                             : cfg.problem.f(un[i]);
    sys.rhs[i - 1] = known[i] - f_mid;
  }

  const std::vector<double> interior = solve(sys);
  GridFunction out(grid);
  for (int i = 1; i < m; ++i) out[i] = interior[i - 1];
  return out;
}

}  // namespace

void L1Config::validate() const {
  params.validate();
  if (std::abs(params.final_time() - problem.final_time) >
      1e-9 * std::max(1.0, problem.final_time)) {
    throw std::invalid_argument("L1Config: tau * steps must equal the problem's T");
  }
  if (std::abs(params.alpha - problem.alpha) > 1e-12) {
    throw std::invalid_argument("L1Config: alpha disagrees with the problem");
  }
  if (std::abs(grid.left() - problem.left) > 1e-12 ||
      std::abs(grid.right() - problem.right) > 1e-12) {
    throw std::invalid_argument("L1Config: grid does not span the problem domain");
  }
  if (!(fp_tol > 0.0)) throw std::invalid_argument("L1Config: fp_tol must be positive");
  if (fp_max_iter < 1) throw std::invalid_argument("L1Config: fp_max_iter must be >= 1");
}

std::vector<double> l1_weights(double alpha, int steps) {
  FractionalParams{alpha, 1.0, steps}.validate();
  std::vector<double> a(steps);
  const double p = 2.0 - alpha;
  for (int k = 0; k < steps; ++k) {
    a[k] = std::pow(k + 1.0, p) - std::pow(static_cast<double>(k), p);
  }
  return a;
}

L1StepReport l1_step(const L1Config& cfg, SchemeState& state) {
  const std::vector<double> a = l1_weights(cfg.params.alpha, cfg.params.steps);
  L1StepReport report;

  if (cfg.mode == L1Nonlinearity::Lagged) {
    state.append(l1_sweep(cfg, a, state, state.current()));
    report.iterations = 1;
  } else {
    GridFunction iterate = state.current();
    int sweeps = 0;
    double gap = 0.0;
    while (true) {
      GridFunction next = l1_sweep(cfg, a, state, iterate);
      ++sweeps;
      gap = norm_inf(next - iterate);
      iterate = std::move(next);
      if (gap <= cfg.fp_tol) break;
      if (sweeps >= cfg.fp_max_iter) {
        throw std::runtime_error(
            "l1_step: fixed-point iteration did not converge, iterate gap = " +
            std::to_string(gap));
      }
    }
    state.append(std::move(iterate));
    report.iterations = sweeps;
  }

  report.n = state.step_index();
  report.residual_inf = l1_residual_inf(cfg, state, report.n);
  return report;
}

double l1_residual_inf(const L1Config& cfg, const SchemeState& state, int level) {
  if (level < 1 || level > state.step_index()) {
    throw std::out_of_range("l1_residual_inf: level out of range");
  }
  const int n = level - 1;
  const std::vector<double> a = l1_weights(cfg.params.alpha, cfg.params.steps);
  const double tau = cfg.params.tau;
  const double mu = std::pow(tau, cfg.params.alpha - 1.0) *
                    gamma_fn(3.0 - cfg.params.alpha);
  const SpaceGrid& grid = cfg.grid;
  const int m = grid.intervals();
  const auto& u = state.history();

  GridFunction mid = u[n + 1];
  mid += u[n];
  mid *= 0.5;
  const GridFunction lap_mid = delta_x2(mid);
  const double a_psi = (n >= 1) ? a[n - 1] : a[0];
  const double t_mid = (n + 0.5) * tau;

  GridFunction hist(grid);
  for (int k = 1; k <= n - 1; ++k) {
    const double w = (a[n - k - 1] - a[n - k]) / tau;
    const double* hi = u[k + 1].values().data();
    const double* lo = u[k].values().data();
    double* out = hist.values().data();
    for (int i = 0; i <= m; ++i) out[i] += w * (hi[i] - lo[i]);
  }

  double res = 0.0;
  for (int i = 1; i < m; ++i) {
    const double lhs = (a[0] * (u[n + 1][i] - u[n][i]) / tau - hist[i] -
                        a_psi * state.psi()[i]) / mu;
    const double f_mid =
        (cfg.mode == L1Nonlinearity::CentralIterative)
            ? 0.5 * (cfg.problem.f(u[n + 1][i]) + cfg.problem.f(u[n][i]))
            : cfg.problem.f(u[n][i]);
    const double rhs = lap_mid[i] - f_mid + cfg.problem.source(grid.node(i), t_mid);
    res = std::max(res, std::abs(lhs - rhs));
  }
  return res;
}

L1RunResult l1_run(const L1Config& cfg) {
  cfg.validate();
  const SpaceGrid& grid = cfg.grid;

  GridFunction u0 = GridFunction::sample(grid, cfg.problem.phi);
  u0[0] = 0.0;
  u0[grid.intervals()] = 0.0;
  GridFunction psi = GridFunction::sample(grid, cfg.problem.psi);
  SchemeState state(std::move(u0), std::move(psi));

  L1RunResult result;
  const auto t0 = Clock::now();
  for (int n = 0; n < cfg.params.steps; ++n) {
    result.reports.push_back(l1_step(cfg, state));
  }
  result.integration_seconds = seconds_since(t0);

  for (const L1StepReport& r : result.reports) {
    result.max_residual = std::max(result.max_residual, r.residual_inf);
  }

  if (cfg.problem.has_exact()) {
    double e2 = 0.0;
    for (int n = 0; n <= cfg.params.steps; ++n) {
      const double t = n * cfg.params.tau;
      GridFunction err = state.level(n);
      for (int i = 0; i <= grid.intervals(); ++i) {
        err[i] -= cfg.problem.exact(grid.node(i), t);
      }
      e2 = std::max(e2, norm_l2(err));
    }
    result.e2 = e2;
  }

  result.history = state.history();
  return result;
}

}  // namespace tfkg
