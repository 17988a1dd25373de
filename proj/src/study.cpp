#include "tfkg/study.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tfkg/version.hpp"

namespace tfkg {

namespace {

int steps_for(double interval, double step) {
  const double ratio = interval / step;
  const int n = static_cast<int>(std::lround(ratio));
  if (n < 1 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("step size must divide the interval evenly");
  }
  return n;
}

struct RunOutcome {
  double e2 = 0.0;
  double wall_seconds = 0.0;
  double max_residual = 0.0;
};

// Case 0 is the homogeneous fixture; 1..3 are the benchmark cases.
ProblemSpec study_problem(int case_id, double alpha, bool case3_half_quadratic) {
  if (case_id == 0) return zero_problem(alpha);
  if (case_id == 3 && case3_half_quadratic) {
    return manufactured_case3_half_quadratic(alpha);
  }
  return manufactured_case(case_id, alpha);
}

RunOutcome one_linearized_run(const ProblemSpec& problem, double alpha,
                              SchemeVariant variant, double tau, double h) {
  SchemeConfig cfg{
      FractionalParams{alpha, tau, steps_for(problem.final_time, tau)},
      SpaceGrid(problem.left, problem.right,
                steps_for(problem.right - problem.left, h)),
      problem, variant};
  RunResult result = run(cfg);
  return {result.e2.value_or(0.0), result.integration_seconds, result.max_residual};
}

RunOutcome one_l1_run(const ProblemSpec& problem, double alpha, double tau, double h) {
  L1Config cfg{
      FractionalParams{alpha, tau, steps_for(problem.final_time, tau)},
      SpaceGrid(problem.left, problem.right,
                steps_for(problem.right - problem.left, h)),
      problem, L1Nonlinearity::CentralIterative};
  L1RunResult result = l1_run(cfg);
  return {result.e2.value_or(0.0), result.integration_seconds, result.max_residual};
}

std::string engine_name(SchemeVariant v) {
  return v == SchemeVariant::CompactFourthOrder ? "compact" : "std";
}

ConvergenceReport run_study(const StudyPlan& plan) {
  plan.validate();

  // Ladder entries are independent runs; fan them out, keep row order.
  const ProblemSpec problem =
      study_problem(plan.case_id, plan.alpha, plan.case3_half_quadratic);
  std::vector<std::future<RunOutcome>> futures;
  futures.reserve(plan.ladder.size());
  for (double entry : plan.ladder) {
    const double tau = plan.direction == RefineDirection::Time ? entry : plan.fixed_step;
    const double h = plan.direction == RefineDirection::Time ? plan.fixed_step : entry;
    futures.push_back(std::async(std::launch::async, one_linearized_run, problem,
                                 plan.alpha, plan.variant, tau, h));
  }

  ConvergenceReport report;
  report.case_id = plan.case_id;
  report.alpha = plan.alpha;
  report.engine = engine_name(plan.variant);
  report.direction = plan.direction;
  report.version = kVersion;

  std::vector<double> errors;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    RunOutcome outcome;
    try {
      outcome = futures[i].get();
    } catch (const std::exception& e) {
      // Drain the remaining entries, then surface the failure together with
      // the rows that did complete.
      for (std::size_t j = i + 1; j < futures.size(); ++j) {
        try {
          futures[j].get();
        } catch (...) {
        }
      }
      const auto rates = rates_from_errors(errors);
      for (std::size_t r = 0; r < report.rows.size(); ++r) report.rows[r].rate = rates[r];
      throw StudyError(e.what(), report);
    }
    ReportRow row;
    row.tau = plan.direction == RefineDirection::Time ? plan.ladder[i] : plan.fixed_step;
    row.h = plan.direction == RefineDirection::Time ? plan.fixed_step : plan.ladder[i];
    row.e2 = outcome.e2;
    row.wall_seconds = outcome.wall_seconds;
    row.max_residual = outcome.max_residual;
    report.rows.push_back(row);
    errors.push_back(outcome.e2);
  }
  const auto rates = rates_from_errors(errors);
  for (std::size_t i = 0; i < report.rows.size(); ++i) report.rows[i].rate = rates[i];
  return report;
}

}  // namespace

void StudyPlan::validate() const {
  if (ladder.empty()) throw std::invalid_argument("StudyPlan: empty ladder");
  for (double v : ladder) {
    if (!(v > 0.0)) throw std::invalid_argument("StudyPlan: ladder entries must be positive");
  }
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (std::abs(ladder[i] - 0.5 * ladder[i - 1]) > 1e-12 * ladder[i - 1]) {
      throw std::invalid_argument("StudyPlan: each ladder entry must halve the previous");
    }
  }
  if (!(fixed_step > 0.0)) throw std::invalid_argument("StudyPlan: fixed step must be positive");
}

std::vector<double> halving_ladder(double coarsest, int halvings) {
  if (!(coarsest > 0.0) || halvings < 0) {
    throw std::invalid_argument("halving_ladder: bad arguments");
  }
  std::vector<double> ladder{coarsest};
  for (int i = 0; i < halvings; ++i) ladder.push_back(ladder.back() * 0.5);
  return ladder;
}

std::vector<std::optional<double>> rates_from_errors(const std::vector<double>& e2) {
  std::vector<std::optional<double>> rates(e2.size());
  for (std::size_t i = 1; i < e2.size(); ++i) {
    if (e2[i] > 0.0 && e2[i - 1] > 0.0 && std::isfinite(e2[i]) && std::isfinite(e2[i - 1])) {
      rates[i] = std::log2(e2[i - 1] / e2[i]);
    }
  }
  return rates;
}

ConvergenceReport run_time_study(const StudyPlan& plan) {
  if (plan.direction != RefineDirection::Time) {
    throw std::invalid_argument("run_time_study: plan direction must be Time");
  }
  return run_study(plan);
}

ConvergenceReport run_space_study(const StudyPlan& plan) {
  if (plan.direction != RefineDirection::Space) {
    throw std::invalid_argument("run_space_study: plan direction must be Space");
  }
  return run_study(plan);
}

ComparisonReport run_comparison(int case_id, double alpha, double h,
                                const std::vector<double>& tau_ladder,
                                bool case3_half_quadratic) {
  StudyPlan check;
  check.ladder = tau_ladder;
  check.fixed_step = h;
  check.validate();

  ComparisonReport cmp;
  for (ConvergenceReport* r : {&cmp.linearized, &cmp.l1}) {
    r->case_id = case_id;
    r->alpha = alpha;
    r->direction = RefineDirection::Time;
    r->version = kVersion;
  }
  cmp.linearized.engine = "std";
  cmp.l1.engine = "l1-central";

  // Serial on purpose: the per-row wall clocks feed a faster/slower verdict.
  const ProblemSpec problem = study_problem(case_id, alpha, case3_half_quadratic);

  // One untimed warm-up of each engine, so the first timed row does not
  // absorb allocator and cache cold-start costs for whichever engine runs
  // first.
  one_linearized_run(problem, alpha, SchemeVariant::StandardSecondOrder,
                     tau_ladder[0], h);
  one_l1_run(problem, alpha, tau_ladder[0], h);

  std::vector<double> err_lin, err_l1;
  for (double tau : tau_ladder) {
    const RunOutcome lin = one_linearized_run(
        problem, alpha, SchemeVariant::StandardSecondOrder, tau, h);
    cmp.linearized.rows.push_back(
        {tau, h, lin.e2, std::nullopt, lin.wall_seconds, lin.max_residual});
    err_lin.push_back(lin.e2);

    const RunOutcome ref = one_l1_run(problem, alpha, tau, h);
    cmp.l1.rows.push_back(
        {tau, h, ref.e2, std::nullopt, ref.wall_seconds, ref.max_residual});
    err_l1.push_back(ref.e2);
  }
  const auto r1 = rates_from_errors(err_lin);
  const auto r2 = rates_from_errors(err_l1);
  for (std::size_t i = 0; i < tau_ladder.size(); ++i) {
    cmp.linearized.rows[i].rate = r1[i];
    cmp.l1.rows[i].rate = r2[i];
  }
  return cmp;
}

namespace {

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sci4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4e", v);
  return buf;
}

std::string rate4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// Convergence tables conventionally label steps as reciprocals; fall back
// to plain decimal when the reciprocal is not a round integer.
std::string step_label(double v) {
  if (v > 0.0) {
    const double inv = 1.0 / v;
    const double rounded = std::round(inv);
    if (rounded >= 1.0 && std::abs(inv - rounded) <= 1e-9 * inv) {
      return "1/" + std::to_string(static_cast<long long>(rounded));
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void emit(const ConvergenceReport& report, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::Csv) {
    out << "alpha,case,variant,tau,h,E2,rate,wall_time_s\n";
    for (const ReportRow& row : report.rows) {
      out << full_precision(report.alpha) << ',' << report.case_id << ','
          << report.engine << ',' << full_precision(row.tau) << ','
          << full_precision(row.h) << ',' << full_precision(row.e2) << ','
          << (row.rate ? full_precision(*row.rate) : std::string{}) << ','
          << full_precision(row.wall_seconds) << '\n';
    }
    return;
  }

  const bool time_dir = report.direction == RefineDirection::Time;
  out << "## case " << report.case_id << ", alpha = " << report.alpha << ", "
      << report.engine << " (tfkg " << report.version << ")\n\n";
  out << "| " << (time_dir ? "tau" : "h") << " | E2 | "
      << (time_dir ? "Rate1" : "Rate2") << " | CPU(s) |\n";
  out << "|---|---|---|---|\n";
  for (const ReportRow& row : report.rows) {
    char cpu[32];
    std::snprintf(cpu, sizeof(cpu), "%.2f", row.wall_seconds);
    out << "| " << step_label(time_dir ? row.tau : row.h) << " | " << sci4(row.e2)
        << " | " << (row.rate ? rate4(*row.rate) : std::string("*")) << " | "
        << cpu << " |\n";
  }
}

void emit(const ConvergenceReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit: cannot open " + path);
  emit(report, format, out);
  if (!out.good()) throw std::runtime_error("emit: write failure on " + path);
}

}  // namespace tfkg
