#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "exitrate/control.hpp"
#include "exitrate/problem.hpp"

namespace exitrate::cli {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string problem = "bm-interval";
  /// 0 selects the default spacing for the problem's dimension.
  double h = 0.0;
  double tol = 1e-10;
  Mode mode = Mode::kMax;
  std::size_t action = 0;
  double dt = 1e-4;
  double T = 2.0;
  std::size_t paths = 10000;
  std::uint64_t seed = 1;
  /// Empty means no files are written.
  std::string out;
};

/// Checks positivity of the numeric fields, resolves and validates the
/// problem, and makes sure the output directory is writable.
ValidatedProblem validate_config(const RunConfig& config);

/// Spacing to use for this problem: config.h, or the default for its dimension.
double resolved_spacing(const RunConfig& config, const ValidatedProblem& problem);

/// Every report embeds this (the seed included) so that runs can be replayed.
Json config_to_json(const RunConfig& config);

ControlOptions control_options(const RunConfig& config);

}  // namespace exitrate::cli
