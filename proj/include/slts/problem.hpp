#ifndef SLTS_PROBLEM_HPP
#define SLTS_PROBLEM_HPP

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slts/coefficients.hpp"
#include "slts/operators.hpp"
#include "slts/spectra.hpp"
#include "slts/time_scale.hpp"

namespace slts {

/// Task parameters a problem file may carry as defaults for the commands;
/// command-line flags override them.
struct TaskDefaults {
  std::optional<std::pair<double, double>> range;
  std::optional<int> max_count;
  std::optional<Complex> z;
  std::optional<std::array<double, 3>> ic;  // anchor, u, u^[1]
  std::optional<std::string> f;             // expression for transform input
  std::vector<double> truncations;          // cuts for the disk diagnostic
  std::optional<int> grid;
};

struct SolverTolerances {
  double rel = 1e-10;
  double abs = 1e-12;
};

/// A fully parsed problem: scale, coefficients, boundary data, tolerances and
/// task defaults, plus the validation reports. Computation commands require
/// all_valid().
struct ProblemSpec {
  TimeScale ts{std::vector<Component>{{0.0, 1.0}}};
  CoefficientSet cs;
  BoundaryCondition bc = BoundaryCondition::separated(0.0, 0.0);
  SolverTolerances tol;
  TaskDefaults task;
  std::string source_name;

  HypothesisReport hypothesis;
  ValidityReport bc_report;

  bool all_valid() const { return hypothesis.ok && bc_report.valid; }
  /// Throws ValidationError naming the first failing clause.
  void ensure_valid() const;
  SpectralOptions spectral_options() const;
};

/// Parses and validates a problem file. Throws ParseError (malformed JSON or
/// expression, with location) or ValidationError (failing clause named).
ProblemSpec load_problem(const std::string& path);

/// Parse without insisting on validity (validation reports are still filled
/// in); used by the validate command.
ProblemSpec parse_problem_file(const std::string& path);
ProblemSpec parse_problem_text(const std::string& text, const std::string& name);

struct CommandFlags {
  std::optional<std::pair<double, double>> range;
  std::optional<int> max_count;
  std::optional<Complex> z;
  std::optional<std::array<double, 3>> ic;
  std::optional<int> grid;
};

/// Dispatches one batch command (validate, ivp, eig, green, mfunc, transform,
/// asymptotics, weyl) writing the artifact to `out` and diagnostics to `err`.
/// Returns the process exit code (0 success, 1 validation failure); numerical
/// failures escape as exceptions for the caller to map to exit code 2.
int run_command(const std::string& command, ProblemSpec& spec,
                const CommandFlags& flags, std::ostream& out, std::ostream& err);

/// Evaluation grid over the whole scale: isolated points plus about n samples
/// spread over the continuous components proportionally to length.
std::vector<double> scale_grid(const TimeScale& ts, int n);

/// "rel,abs" (as in the SLTS_TOL environment variable).
std::optional<SolverTolerances> parse_tolerances(const std::string& text);

std::string format_float(double v);  // %.17g, bit-stable output formatting

}  // namespace slts

#endif
