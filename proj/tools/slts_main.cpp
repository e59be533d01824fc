// slts: batch solver for Sturm-Liouville problems on hybrid
// continuous/discrete domains. One command per invocation; problem files are
// JSON documents, artifacts go to stdout or --out.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slts/errors.hpp"
#include "slts/problem.hpp"

namespace {

struct CliState {
  std::string problem_path;
  std::vector<double> range;
  int max_count = -1;
  std::vector<double> z;
  std::vector<double> ic;
  int grid = -1;
  std::string out_path;
};

void add_common(CLI::App* cmd, CliState& state) {
  cmd->add_option("problem", state.problem_path, "problem file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--range", state.range, "spectral parameter range: lo hi")
      ->expected(2);
  cmd->add_option("--max", state.max_count, "maximum count (eigenvalues, samples)");
  cmd->add_option("--z", state.z, "spectral point: re [im]")->expected(1, 2);
  cmd->add_option("--ic", state.ic, "initial data: c u d")->expected(3);
  cmd->add_option("--grid", state.grid, "output grid size");
  cmd->add_option("--out", state.out_path, "write the artifact to a file");
}

slts::CommandFlags to_flags(const CliState& state) {
  slts::CommandFlags flags;
  if (state.range.size() == 2) flags.range = {state.range[0], state.range[1]};
  if (state.max_count >= 0) flags.max_count = state.max_count;
  if (!state.z.empty())
    flags.z = slts::Complex(state.z[0], state.z.size() > 1 ? state.z[1] : 0.0);
  if (state.ic.size() == 3) flags.ic = {{state.ic[0], state.ic[1], state.ic[2]}};
  if (state.grid > 0) flags.grid = state.grid;
  return flags;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sturm-Liouville solver on hybrid continuous/discrete domains"};
  app.require_subcommand(1);

  CliState state;
  const char* names[] = {"validate", "ivp",       "eig",         "green",
                         "mfunc",    "transform", "asymptotics", "weyl"};
  const char* briefs[] = {
      "check the problem file and report admissibility",
      "solve an initial value problem (trajectory CSV)",
      "locate eigenvalues and norming constants (JSON)",
      "evaluate the resolvent kernel on a grid (CSV)",
      "sample the Weyl-Titchmarsh m-function on a z-grid (CSV)",
      "expand task.f over computed eigenfunctions (JSON)",
      "eigenvalue growth against the continuous length (JSON)",
      "disk diagnostic over nested truncations (JSON)"};
  for (int i = 0; i < 8; ++i) add_common(app.add_subcommand(names[i], briefs[i]), state);

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    slts::ProblemSpec spec = slts::parse_problem_file(state.problem_path);
    if (const char* env = std::getenv("SLTS_TOL")) {
      if (auto tol = slts::parse_tolerances(env)) {
        spec.tol = *tol;
      } else {
        std::cerr << "warning: ignoring malformed SLTS_TOL (expected \"rel,abs\")\n";
      }
    }
    const slts::CommandFlags flags = to_flags(state);
    if (!state.out_path.empty()) {
      std::ofstream out(state.out_path);
      if (!out) {
        std::cerr << "error: cannot open output file " << state.out_path << "\n";
        return 2;
      }
      return slts::run_command(command, spec, flags, out, std::cerr);
    }
    return slts::run_command(command, spec, flags, std::cout, std::cerr);
  } catch (const slts::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const slts::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const slts::EvalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const slts::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
