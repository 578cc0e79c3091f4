#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "exitrate/generator.hpp"
#include "exitrate/grid.hpp"
#include "exitrate/problem.hpp"

namespace exitrate {

/// Independent generator for path `index` of a run with master `seed`;
/// splitmix64 mixing makes the streams independent of how paths are
/// scheduled.
std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t index);

/// Stationary feedback control: the action at x is the policy value at the
/// nearest grid node.
class FeedbackPolicy {
 public:
  FeedbackPolicy(Grid grid, PolicySpec policy);
  /// The single-action (or constant-action) control.
  static FeedbackPolicy constant(const Grid& grid, std::size_t action);

  std::size_t action(const Point& x) const { return policy_[grid_.nearest(x)]; }
  const Grid& grid() const { return grid_; }
  const PolicySpec& policy() const { return policy_; }

 private:
  Grid grid_;
  PolicySpec policy_;
};

/// Multilinear interpolation of a nodal field, clamped to the node hull.
class NodalInterpolant {
 public:
  NodalInterpolant(const Grid& grid, std::vector<double> values);
  double operator()(const Point& x) const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

struct SimulationOptions {
  Point x0{0.5, 0.5};
  double dt = 1e-4;
  double T = 2.0;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 1;
  /// 0 = worker_count().
  std::size_t workers = 0;
};

struct TrajectoryEnsemble {
  std::size_t n_paths = 0;
  double dt = 0.0;
  double T = 0.0;
  std::uint64_t seed = 0;
  /// Exit time, or T for censored paths.
  std::vector<double> exit_times;
  std::vector<char> exited;
  std::vector<Point> terminal;

  std::size_t survivors_at(double t) const;
  double survival_fraction(double t) const;
  /// CSV: path, exit_time, censored, terminal coordinates.
  std::string csv(int dim) const;
};

/// Euler-Maruyama with killing at the first step that lands outside the
/// open box (no bridge correction).
TrajectoryEnsemble simulate_killed(const ValidatedProblem& problem, const FeedbackPolicy& policy,
                                   const SimulationOptions& options);

struct ExitRateEstimate {
  double rate = 0.0;
  double standard_error = 0.0;
  std::size_t survivors_t0 = 0;
};

inline constexpr std::size_t kBootstrapResamples = 200;
inline constexpr std::size_t kMinSurvivors = 100;

/// Least-squares slope of log empirical survival on 21 equally spaced
/// times in [t0, t1]; standard error from a path-level bootstrap.
/// Throws TooFewSurvivors below kMinSurvivors survivors at t0.
ExitRateEstimate estimate_exit_rate(const TrajectoryEnsemble& ensemble, double t0, double t1);

struct QProcessOccupancy {
  /// Time-weighted occupancy of each node's cell, normalized.
  std::vector<double> histogram;
  std::size_t killed = 0;
  std::size_t steps = 0;
  std::size_t projections = 0;
  /// Time average of |sigma^T grad psi|^2 / 2 along the paths.
  double energy_average = 0.0;
  /// Terminal values g(X_T) e^{-psi(X_T)} when a test function is given.
  std::vector<double> weighted_terminal;
  bool projection_flag() const { return static_cast<double>(projections) > 1e-3 * static_cast<double>(steps); }
};

/// Euler-Maruyama for dX = (m_v + a grad psi) dt + sigma dW with grad psi
/// interpolated from the grid. A step that leaves the box is retried with
/// half the step (same noise) up to 20 times, then projected onto D_2h.
QProcessOccupancy simulate_qprocess(const ValidatedProblem& problem, const FeedbackPolicy& policy,
                                    const Field& psi, const SimulationOptions& options,
                                    const std::function<double(const Point&)>& test = nullptr);

struct CtmcPath {
  std::vector<double> times;
  std::vector<std::size_t> states;
  bool killed = false;
  double end_time = 0.0;
  /// Time spent in each state up to end_time.
  std::vector<double> occupation;
};

/// Event-driven simulation up to T; the killing rate ends the path.
CtmcPath simulate_ctmc(const GeneratorMatrix& g, std::size_t x0, double T, std::uint64_t seed,
                       std::uint64_t stream = 0);

struct GirsanovEstimate {
  double lhs = 0.0;
  double lhs_stderr = 0.0;
  double rhs = 0.0;
  double rhs_stderr = 0.0;
  /// 95% confidence intervals overlap.
  bool overlap = false;
};

struct GirsanovMcOptions {
  Point x0{0.5, 0.5};
  double t = 1.0;
  std::size_t n_paths = 10000;
  double dt_killed = 1e-5;
  double dt_qprocess = 1e-4;
  std::uint64_t seed = 1;
  std::size_t workers = 0;
};

/// lhs = E g(X_t) 1{t < tau}; rhs = e^{-lambda t + psi(x0)} E g(Y_t) e^{-psi(Y_t)}
/// with Y the Q-process.
GirsanovEstimate mc_girsanov_check(const ValidatedProblem& problem, const FeedbackPolicy& policy,
                                   double lambda, const Field& psi,
                                   const std::function<double(const Point&)>& g,
                                   const GirsanovMcOptions& options);

/// Mean and standard error of a sample, summed pairwise.
std::pair<double, double> mean_and_stderr(const std::vector<double>& v);

}  // namespace exitrate
