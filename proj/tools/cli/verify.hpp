#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace exitrate::cli {

inline constexpr int kCriterionCount = 15;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  Json details;
  /// Wall time; kept out of the JSON report so reports stay reproducible.
  double seconds = 0.0;
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

/// Runs every acceptance criterion. Uses config.seed for all random draws and
/// config.tol for eigen solves; the problem, spacing and simulation settings
/// of the config are ignored because each criterion pins its own instance.
std::vector<CriterionResult> run_acceptance_suite(const RunConfig& config,
                                                  const CriterionCallback& on_result = nullptr);

/// Runs a single criterion (1-based id).
CriterionResult run_criterion(int id, const RunConfig& config);

Json criterion_to_json(const CriterionResult& result);

/// "PASS  3 name" style line.
std::string criterion_line(const CriterionResult& result);

}  // namespace exitrate::cli
