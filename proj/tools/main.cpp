#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "cli/commands.hpp"
#include "exitrate/control.hpp"

namespace {

using exitrate::cli::CommandResult;
using exitrate::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& config, std::string& mode) {
  sub->add_option("--problem", config.problem,
                  "catalog name (optionally name:key=value,...) or JSON problem file");
  sub->add_option("--h", config.h, "grid spacing (default depends on the dimension)");
  sub->add_option("--tol", config.tol, "eigen-solver residual tolerance");
  sub->add_option("--mode", mode, "MAX (minimal exit rate) or MIN (maximal)");
  sub->add_option("--action", config.action, "action index for the fixed-policy solve");
  sub->add_option("--dt", config.dt, "Euler-Maruyama step");
  sub->add_option("--T", config.T, "simulation horizon");
  sub->add_option("--paths", config.paths, "number of sample paths");
  sub->add_option("--seed", config.seed, "master seed");
  sub->add_option("--out", config.out, "directory for report.json and CSV files");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal exit rates of controlled diffusions on a box"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  RunConfig config;
  std::string mode = "MAX";
  const std::map<std::string, std::function<CommandResult(const RunConfig&)>> commands = {
      {"solve", exitrate::cli::cmd_solve},
      {"optimize", exitrate::cli::cmd_optimize},
      {"qprocess", exitrate::cli::cmd_qprocess},
      {"variational", exitrate::cli::cmd_variational},
      {"simulate", exitrate::cli::cmd_simulate},
      {"verify", exitrate::cli::cmd_verify},
      {"representations", exitrate::cli::cmd_representations},
  };
  const std::map<std::string, std::string> help = {
      {"solve", "principal eigenpair of a fixed constant-action policy"},
      {"optimize", "policy iteration for the optimal exit rate"},
      {"qprocess", "Q-process, stationary laws, survival table and Lyapunov certificate"},
      {"variational", "occupation-measure linear program"},
      {"simulate", "Monte Carlo exit rate, Q-process occupancy and change of measure"},
      {"verify", "run the acceptance suite"},
      {"representations", "four independent expressions for the optimal exit rate"},
  };
  for (const auto& [name, fn] : commands) add_common(app.add_subcommand(name, help.at(name)), config, mode);

  CLI11_PARSE(app, argc, argv);

  try {
    config.mode = exitrate::parse_mode(mode);
    const std::string name = app.get_subcommands().front()->get_name();
    const CommandResult result = commands.at(name)(config);
    std::cout << result.report.dump(2) << '\n';
    exitrate::cli::write_outputs(config, result);
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return exitrate::cli::kExitError;
}
