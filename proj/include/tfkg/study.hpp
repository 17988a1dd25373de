#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfkg/l1_scheme.hpp"
#include "tfkg/scheme.hpp"

namespace tfkg {

enum class RefineDirection { Time, Space };
enum class ReportFormat { Csv, Markdown };

/// One refinement study: fix one step size, halve the other down a ladder.
struct StudyPlan {
  int case_id = 1;
  double alpha = 1.5;
  SchemeVariant variant = SchemeVariant::StandardSecondOrder;
  RefineDirection direction = RefineDirection::Time;
  double fixed_step = 1e-3;          // h when refining in time, tau when in space
  std::vector<double> ladder;        // strictly halving tau (Time) or h (Space)
  // Run case 3 with the half-quadratic nonlinearity instead of the square
  // root; the stored case-3 reference tables track that variant.
  bool case3_half_quadratic = false;

  /// Throws unless the ladder is nonempty and each entry halves the previous.
  void validate() const;
};

/// Build a ladder from the coarsest step by repeated halving.
std::vector<double> halving_ladder(double coarsest, int halvings);

struct ReportRow {
  double tau = 0.0;
  double h = 0.0;
  double e2 = 0.0;
  std::optional<double> rate;  // empty on the first row and wherever undefined
  double wall_seconds = 0.0;   // time-integration loop only
  double max_residual = 0.0;   // worst per-step residual of the run
};

struct ConvergenceReport {
  int case_id = 1;
  double alpha = 1.5;
  std::string engine;     // "std", "compact", "l1-central", "l1-lagged"
  RefineDirection direction = RefineDirection::Time;
  std::string version;
  std::vector<ReportRow> rows;
};

/// Thrown when a ladder entry fails; carries the rows that completed before
/// the first failing entry, in ladder order.
class StudyError : public std::runtime_error {
 public:
  StudyError(const std::string& what, ConvergenceReport partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const ConvergenceReport& partial() const { return partial_; }

 private:
  ConvergenceReport partial_;
};

ConvergenceReport run_time_study(const StudyPlan& plan);
ConvergenceReport run_space_study(const StudyPlan& plan);

struct ComparisonReport {
  ConvergenceReport linearized;
  ConvergenceReport l1;
};

/// Table-style head-to-head of the linearized scheme against the iterative L1
/// scheme on a shared tau ladder. Runs serially so the per-row wall clocks are
/// comparable.
ComparisonReport run_comparison(int case_id, double alpha, double h,
                                const std::vector<double>& tau_ladder,
                                bool case3_half_quadratic = false);

/// CSV: full double precision, header
/// alpha,case,variant,tau,h,E2,rate,wall_time_s (rate left empty when
/// undefined). Markdown: compact table, 4 significant digits, undefined
/// rates rendered as "*".
void emit(const ConvergenceReport& report, ReportFormat format, std::ostream& out);
void emit(const ConvergenceReport& report, ReportFormat format, const std::string& path);

/// Rates recomputed from the E2 column: log2(E2_prev / E2_this).
std::vector<std::optional<double>> rates_from_errors(const std::vector<double>& e2);

}  // namespace tfkg
