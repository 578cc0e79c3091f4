#pragma once

#include <functional>
#include <optional>

#include "exitrate/control.hpp"
#include "exitrate/mc.hpp"
#include "exitrate/qprocess.hpp"
#include "exitrate/variational.hpp"

namespace exitrate::cli {

/// Optimal (or worst) policy on a grid with its Q-process.
struct OptimalSetup {
  Grid grid;
  PolicyIterationTrace trace;
  QProcessModel model;
};

OptimalSetup optimal_setup(const ValidatedProblem& problem, double h, Mode mode,
                           const ControlOptions& control);

/// Mirror policy u -> K-1-u.
PolicySpec flipped_policy(const PolicySpec& policy, std::size_t actions);

QProcessModel policy_qprocess(const Grid& grid, const ValidatedProblem& problem,
                              const PolicySpec& policy, const ControlOptions& control);

struct VariationalRun {
  OptimalSetup optimal;
  OccupationLP lp;
  OccupationSolution solution;
  double induced_objective = 0.0;
  double induced_feasibility = 0.0;
  double zero_sum = 0.0;
  MinimizerStructure structure;
  /// 0.9 * LP minimizer + 0.1 * mirror-policy measure; absent with one action.
  std::optional<double> perturbed_objective;
  std::optional<MinimizerStructure> perturbed_structure;
};

VariationalRun run_variational(const ValidatedProblem& problem, double h,
                               const ControlOptions& control);

/// Indicator of the centered ball of radius min_side/10.
std::function<double(const Point&)> central_indicator(const Box& box);

struct KilledRun {
  ExitRateEstimate estimate;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double survival_at_T = 0.0;
};

KilledRun run_killed(const ValidatedProblem& problem, const FeedbackPolicy& policy,
                     const SimulationOptions& options, double window_lo, double window_hi);

}  // namespace exitrate::cli
