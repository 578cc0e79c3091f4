#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exitrate/eigenpair.hpp"
#include "exitrate/generator.hpp"
#include "exitrate/grid.hpp"
#include "exitrate/problem.hpp"

namespace exitrate {

/// kMax selects argmax_u <m(x,u), grad psi> (the optimal, slowest exit);
/// kMin selects argmin (the fastest exit).
enum class Mode { kMax, kMin };

std::string_view to_string(Mode mode);
/// Accepts "max"/"MAX"/"min"/"MIN".
Mode parse_mode(std::string_view text);

struct ControlOptions {
  EigenOptions eigen;
  AssemblyOptions assembly;
  /// Scores within tie_tolerance * max(1, |best|) of the best count as ties
  /// and resolve to the lowest action index.
  double tie_tolerance = 1e-10;
  std::size_t max_iterations = 10000;
};

struct PolicyStep {
  PolicySpec policy;
  double lambda = 0.0;
  std::array<double, 2> cw{0.0, 0.0};
  /// Nodes whose action changed relative to the previous step.
  std::size_t changes = 0;
};

struct PolicyIterationTrace {
  Mode mode = Mode::kMax;
  std::vector<PolicyStep> steps;
  bool converged = false;
  PolicySpec policy;
  EigenPair eigen;
  GeneratorMatrix generator;

  double lambda() const { return eigen.lambda; }
  /// iteration,lambda,lambda_lo,lambda_hi,changes
  std::string csv() const;
};

PolicySpec policy_improve(const Grid& grid, const ValidatedProblem& problem, const Field& psi,
                          Mode mode, double tie_tolerance = 1e-10);

PolicyIterationTrace policy_iteration(const ValidatedProblem& problem, double h, Mode mode,
                                      const ControlOptions& options = {});

/// Policy iteration on an arbitrary grid (for instance an enlarged box),
/// optionally with an additional killing potential.
PolicyIterationTrace policy_iteration(const ValidatedProblem& problem, const Grid& grid,
                                      Mode mode, const ControlOptions& options = {},
                                      const std::optional<Field>& potential = std::nullopt);

struct EnumerationResult {
  double lambda = 0.0;
  PolicySpec policy;
  std::size_t evaluated = 0;
};

/// Exhaustive search over all K^n stationary policies. Throws TooLarge when
/// K^n > 2^20.
EnumerationResult enumerate_policies(const ValidatedProblem& problem, double h,
                                     const ControlOptions& options = {});

/// One generator per action (uniform policies), in action order.
std::vector<GeneratorMatrix> action_generators(const Grid& grid, const ValidatedProblem& problem,
                                               const AssemblyOptions& options = {});

/// Residual of the log-form Bellman equation
///   opt_u [(L_u psi)(x)] + |sigma^T grad psi|^2 / 2 + lambda
/// on nodes farther than eps from the boundary, where the discrete operator
/// only touches interior nodes.
struct HjbResidual {
  double h = 0.0;
  double eps = 0.0;
  double sup = 0.0;
  std::size_t nodes = 0;
};

HjbResidual hjb_residual(const Grid& grid, const ValidatedProblem& problem,
                         const PolicyIterationTrace& trace, double eps,
                         const AssemblyOptions& options = {});

struct HjbConvergence {
  std::vector<HjbResidual> levels;
  /// Least-squares slope of log sup against log h.
  double order = 0.0;
  /// max over levels of sup / h.
  double constant = 0.0;
};

/// Runs policy iteration at each h and measures the residual on the fixed
/// layer eps = min_side / 8.
HjbConvergence hjb_convergence(const ValidatedProblem& problem, const std::vector<double>& hs,
                               Mode mode, const ControlOptions& options = {});

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace exitrate
