#pragma once

#include <map>
#include <string>

#include "cli/config.hpp"

namespace exitrate::cli {

/// Exit status convention shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFail = 2;

struct CommandResult {
  Json report;
  int exit_code = kExitOk;
  /// File name -> contents, written under RunConfig::out when it is set.
  std::map<std::string, std::string> files;
};

CommandResult cmd_solve(const RunConfig& config);
CommandResult cmd_optimize(const RunConfig& config);
CommandResult cmd_qprocess(const RunConfig& config);
CommandResult cmd_variational(const RunConfig& config);
CommandResult cmd_simulate(const RunConfig& config);
CommandResult cmd_representations(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);

/// Writes report.json plus the attached files into config.out (if set).
void write_outputs(const RunConfig& config, const CommandResult& result);

}  // namespace exitrate::cli
