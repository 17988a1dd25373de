#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tfkg/coeffs.hpp"
#include "tfkg/l1_scheme.hpp"
#include "tfkg/scheme.hpp"
#include "tfkg/study.hpp"
#include "tfkg/version.hpp"

namespace {

// Step sizes are usually written as reciprocals on the command line; accept
// both "1/160" and "0.00625".
double parse_step(const std::string& text) {
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const double num = std::stod(text.substr(0, slash));
    const double den = std::stod(text.substr(slash + 1));
    if (!(den > 0.0)) throw CLI::ValidationError("step", "zero denominator in " + text);
    return num / den;
  }
  return std::stod(text);
}

tfkg::SchemeVariant parse_variant(const std::string& name) {
  if (name == "std") return tfkg::SchemeVariant::StandardSecondOrder;
  if (name == "compact") return tfkg::SchemeVariant::CompactFourthOrder;
  throw CLI::ValidationError("--variant", "expected std or compact, got " + name);
}

tfkg::ReportFormat parse_format(const std::string& name) {
  if (name == "csv") return tfkg::ReportFormat::Csv;
  if (name == "md") return tfkg::ReportFormat::Markdown;
  throw CLI::ValidationError("--format", "expected csv or md, got " + name);
}

int steps_from(double interval, double step, const char* what) {
  const double ratio = interval / step;
  const int n = static_cast<int>(std::lround(ratio));
  if (n < 1 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    throw CLI::ValidationError(what, "must divide the interval evenly");
  }
  return n;
}

struct CommonOpts {
  int case_id = 1;
  double alpha = 1.5;
  std::string variant = "std";
  std::string h_text = "1/1000";
  std::string tau_text = "1/20";
  int ladder = 3;
  std::string format = "csv";
  std::string out_path;
  std::string case3_f = "sqrt";

  tfkg::ProblemSpec problem() const {
    if (case_id == 3 && case3_f == "halfq") {
      return tfkg::manufactured_case3_half_quadratic(alpha);
    }
    return tfkg::manufactured_case(case_id, alpha);
  }
};

void add_common(CLI::App* cmd, CommonOpts* opts, bool with_ladder) {
  cmd->add_option("--case", opts->case_id, "Benchmark case id")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--alpha", opts->alpha, "Fractional order in (1,2)");
  cmd->add_option("--h", opts->h_text, "Spatial step (e.g. 1/1000 or 0.001)");
  cmd->add_option("--tau", opts->tau_text, "Time step (e.g. 1/20 or 0.05)");
  cmd->add_option("--format", opts->format, "Report format: csv or md");
  cmd->add_option("--out", opts->out_path, "Output path (stdout when omitted)");
  cmd->add_option("--case3-f", opts->case3_f,
                  "Case-3 nonlinearity: sqrt (default) or halfq, the variant "
                  "the stored reference tables use")
      ->check(CLI::IsMember({"sqrt", "halfq"}));
  if (with_ladder) {
    cmd->add_option("--ladder", opts->ladder,
                    "Number of halvings below the coarsest step")
        ->check(CLI::Range(0, 12));
  }
}

void deliver(const tfkg::ConvergenceReport& report, const CommonOpts& opts) {
  const tfkg::ReportFormat fmt = parse_format(opts.format);
  if (opts.out_path.empty()) {
    tfkg::emit(report, fmt, std::cout);
  } else {
    tfkg::emit(report, fmt, opts.out_path);
    std::cout << "wrote " << opts.out_path << "\n";
  }
}

int run_solve(const CommonOpts& opts) {
  const tfkg::ProblemSpec problem = opts.problem();
  const double tau = parse_step(opts.tau_text);
  const double h = parse_step(opts.h_text);
  tfkg::SchemeConfig cfg{
      tfkg::FractionalParams{opts.alpha, tau,
                             steps_from(problem.final_time, tau, "--tau")},
      tfkg::SpaceGrid(problem.left, problem.right,
                      steps_from(problem.right - problem.left, h, "--h")),
      problem, parse_variant(opts.variant)};
  const tfkg::RunResult result = tfkg::run(cfg);

  std::printf("case %d  alpha %.3g  variant %s  tau %s  h %s\n", opts.case_id,
              opts.alpha, opts.variant.c_str(), opts.tau_text.c_str(),
              opts.h_text.c_str());
  if (result.e2) std::printf("E2            %.6e\n", *result.e2);
  std::printf("max residual  %.3e\n", result.max_residual);
  std::printf("wall time     %.3f s\n", result.integration_seconds);

  if (!opts.out_path.empty()) {
    tfkg::ConvergenceReport report;
    report.case_id = opts.case_id;
    report.alpha = opts.alpha;
    report.engine = opts.variant;
    report.version = tfkg::kVersion;
    report.rows.push_back(
        {tau, h, result.e2.value_or(0.0), std::nullopt, result.integration_seconds});
    tfkg::emit(report, parse_format(opts.format), opts.out_path);
    std::cout << "wrote " << opts.out_path << "\n";
  }
  return 0;
}

int run_study_cmd(const CommonOpts& opts, tfkg::RefineDirection direction) {
  tfkg::StudyPlan plan;
  plan.case_id = opts.case_id;
  plan.alpha = opts.alpha;
  plan.variant = parse_variant(opts.variant);
  plan.direction = direction;
  plan.case3_half_quadratic = opts.case3_f == "halfq";
  if (direction == tfkg::RefineDirection::Time) {
    plan.fixed_step = parse_step(opts.h_text);
    plan.ladder = tfkg::halving_ladder(parse_step(opts.tau_text), opts.ladder);
    deliver(tfkg::run_time_study(plan), opts);
  } else {
    plan.fixed_step = parse_step(opts.tau_text);
    plan.ladder = tfkg::halving_ladder(parse_step(opts.h_text), opts.ladder);
    deliver(tfkg::run_space_study(plan), opts);
  }
  return 0;
}

int run_compare(const CommonOpts& opts) {
  const std::vector<double> ladder =
      tfkg::halving_ladder(parse_step(opts.tau_text), opts.ladder);
  const tfkg::ComparisonReport cmp =
      tfkg::run_comparison(opts.case_id, opts.alpha, parse_step(opts.h_text),
                           ladder, opts.case3_f == "halfq");

  const tfkg::ReportFormat fmt = parse_format(opts.format);
  if (opts.out_path.empty()) {
    tfkg::emit(cmp.linearized, fmt, std::cout);
    std::cout << "\n";
    tfkg::emit(cmp.l1, fmt, std::cout);
  } else {
    const std::string lin_path = opts.out_path + ".linearized";
    const std::string l1_path = opts.out_path + ".l1";
    tfkg::emit(cmp.linearized, fmt, lin_path);
    tfkg::emit(cmp.l1, fmt, l1_path);
    std::cout << "wrote " << lin_path << " and " << l1_path << "\n";
  }
  for (std::size_t i = 0; i < cmp.linearized.rows.size(); ++i) {
    const auto& a = cmp.linearized.rows[i];
    const auto& b = cmp.l1.rows[i];
    std::printf("tau %.6g: linearized %.2fs %s l1-central %.2fs\n", a.tau,
                a.wall_seconds, a.wall_seconds < b.wall_seconds ? "faster than" : "SLOWER than",
                b.wall_seconds);
  }
  return 0;
}

int run_coeff_dump(double alpha, const std::string& tau_text, int steps, int row,
                   const std::string& out_path) {
  const double tau = parse_step(tau_text);
  const tfkg::CoefficientTable table(tfkg::FractionalParams{alpha, tau, steps});
  if (row < 0 || row >= steps) {
    throw CLI::ValidationError("--row", "must lie in [0, steps)");
  }
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open " + out_path);
    out = &file;
  }
  *out << "k,c,d\n";
  char buf[96];
  for (int k = 0; k <= row; ++k) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", k, table.c(k, row),
                  table.d(k, row));
    *out << buf;
  }
  if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver and convergence-study tool for nonlinear time-fractional "
               "Klein-Gordon type equations"};
  // Long-only help everywhere: the -h short form would clash with --h.
  app.set_help_flag("--help", "Print help and exit");
  app.set_help_all_flag("--help-all", "Print help for all subcommands");
  app.set_version_flag("--version", tfkg::kVersion);
  app.set_config("--config", "", "TOML config file; sections per subcommand, "
                 "flags override file values");
  app.require_subcommand(1);

  CommonOpts solve_opts, time_opts, space_opts, cmp_opts;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Run one configuration and report E2");
  solve_cmd->set_help_flag("--help", "Print help and exit");
  add_common(solve_cmd, &solve_opts, false);
  solve_cmd->add_option("--variant", solve_opts.variant, "std or compact");

  CLI::App* time_cmd = app.add_subcommand(
      "time-study", "Temporal refinement study at fixed h (tau halves per rung)");
  time_cmd->set_help_flag("--help", "Print help and exit");
  add_common(time_cmd, &time_opts, true);
  time_cmd->add_option("--variant", time_opts.variant, "std or compact");

  CLI::App* space_cmd = app.add_subcommand(
      "space-study", "Spatial refinement study at fixed tau (h halves per rung)");
  space_cmd->set_help_flag("--help", "Print help and exit");
  add_common(space_cmd, &space_opts, true);
  space_cmd->add_option("--variant", space_opts.variant, "std or compact");

  CLI::App* cmp_cmd = app.add_subcommand(
      "compare-l1", "Head-to-head of the linearized scheme against the "
                    "iterative L1 scheme on a shared tau ladder");
  cmp_cmd->set_help_flag("--help", "Print help and exit");
  add_common(cmp_cmd, &cmp_opts, true);

  double cd_alpha = 1.5;
  std::string cd_tau = "0.01";
  int cd_steps = 10, cd_row = -1;
  std::string cd_out;
  CLI::App* coeff_cmd = app.add_subcommand(
      "coeff-dump", "Dump the weight rows c_k, d_k for one time level as CSV");
  coeff_cmd->set_help_flag("--help", "Print help and exit");
  coeff_cmd->add_option("--alpha", cd_alpha, "Fractional order in (1,2)");
  coeff_cmd->add_option("--tau", cd_tau, "Time step");
  coeff_cmd->add_option("--steps", cd_steps, "Step count N")->check(CLI::PositiveNumber);
  coeff_cmd->add_option("--row", cd_row, "Row index n in [0, steps)")->required();
  coeff_cmd->add_option("--out", cd_out, "Output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(solve_opts);
    if (time_cmd->parsed()) return run_study_cmd(time_opts, tfkg::RefineDirection::Time);
    if (space_cmd->parsed()) return run_study_cmd(space_opts, tfkg::RefineDirection::Space);
    if (cmp_cmd->parsed()) return run_compare(cmp_opts);
    if (coeff_cmd->parsed()) return run_coeff_dump(cd_alpha, cd_tau, cd_steps, cd_row, cd_out);
  } catch (const tfkg::StudyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    const CommonOpts& opts = time_cmd->parsed() ? time_opts : space_opts;
    if (!e.partial().rows.empty()) {
      std::cerr << "completed rows before the failure:\n";
      try {
        deliver(e.partial(), opts);
      } catch (const std::exception& inner) {
        std::cerr << "error emitting partial report: " << inner.what() << "\n";
      }
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
