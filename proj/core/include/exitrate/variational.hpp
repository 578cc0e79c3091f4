#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "exitrate/control.hpp"
#include "exitrate/generator.hpp"
#include "exitrate/grid.hpp"
#include "exitrate/problem.hpp"
#include "exitrate/qprocess.hpp"
#include "exitrate/simplex.hpp"

namespace exitrate {

/// A w-grid point at a node: w = scale * grad psi_candidate(x). Scale 0 is
/// the point w = 0.
struct WPoint {
  std::size_t candidate = 0;
  double scale = 0.0;
  Vec2 w{0.0, 0.0};
};

struct WGrid {
  /// Deduplicated candidate log-eigenfunctions.
  std::vector<Field> candidates;
  std::vector<std::vector<WPoint>> per_node;
};

inline constexpr std::size_t kMaxWPoints = 16;
inline constexpr double kWScales[] = {0.5, 1.0, 2.0};

/// Per node: {0} and scale * grad psi for every candidate and scale in
/// {1/2, 1, 2}. Identical candidates are merged; at most five are kept so
/// that every node has at most 16 points.
WGrid build_w_grid(const Grid& grid, const std::vector<Field>& candidate_psis);

/// One LP column: mass at node x under action u with drift perturbation w.
struct OccupationColumn {
  std::size_t node = 0;
  std::size_t action = 0;
  std::size_t wpoint = 0;
  /// Relative-entropy rate of the tilted row against the untilted one.
  double cost = 0.0;
  /// 1/2 |sigma^T w|^2.
  double quadratic_cost = 0.0;
};

/// Stationarity of the tilted chain in every interior row plus mass one.
///
/// The column for (x, u, w = s grad psi_c) is row x of G_u with each
/// neighbour rate q multiplied by exp(s (psi_c(y) - psi_c(x))). With s > 0
/// the boundary is at psi = -inf, so the killing rate is tilted to zero.
/// With w matched to the ground state this is row x of the Q-process
/// generator, which makes the Q-process invariant law a feasible point.
struct OccupationLP {
  LinearProgram lp;
  std::vector<OccupationColumn> columns;
  WGrid w_grid;
  std::size_t nodes = 0;
  std::size_t actions = 0;
};

/// `allowed_actions`, when given, restricts node x to that action (the
/// fixed-policy program).
OccupationLP build_occupation_lp(const Grid& grid, const ValidatedProblem& problem,
                                 const WGrid& w_grid,
                                 const std::optional<PolicySpec>& allowed_actions = std::nullopt,
                                 const AssemblyOptions& assembly = {});

struct OccupationSolution {
  double value = 0.0;
  /// 1/2 sum pi |sigma^T w|^2 at the optimum.
  double quadratic_value = 0.0;
  Eigen::VectorXd pi;
  LpSolution lp;
};

OccupationSolution solve_occupation_lp(const OccupationLP& lp);

/// pi placing mu(x) on the column (x, v(x), candidate, scale 1).
Eigen::VectorXd induced_measure(const OccupationLP& lp, const PolicySpec& policy,
                                std::size_t candidate, const Field& mu);

/// Index of `psi` among the deduplicated candidates.
std::size_t find_candidate(const WGrid& w_grid, const Field& psi);

double objective(const OccupationLP& lp, const Eigen::VectorXd& pi);
double quadratic_objective(const OccupationLP& lp, const Eigen::VectorXd& pi);
double feasibility_residual(const OccupationLP& lp, const Eigen::VectorXd& pi);

/// sum over columns of pi (A_col f)(x), the discrete integral of the
/// extended generator applied to f.
double generator_integral(const OccupationLP& lp, const Eigen::VectorXd& pi, const Field& f);

struct MinimizerStructure {
  /// TV between the x-marginal and mu_tilde.
  double marginal_tv = 0.0;
  /// Mass on the optimal action, and on the w point nearest grad psi*.
  double action_mass = 0.0;
  double gradient_mass = 0.0;
  bool marginal_ok = false;
  bool action_ok = false;
  bool gradient_ok = false;
  bool ok() const { return marginal_ok && action_ok && gradient_ok; }
};

MinimizerStructure verify_minimizer_structure(const OccupationLP& lp, const Eigen::VectorXd& pi,
                                              const PolicySpec& optimal_policy,
                                              const Field& psi_star, const Field& mu_tilde);

struct FixedPolicyResult {
  double value = 0.0;
  double lambda = 0.0;
  double induced_objective = 0.0;
};

/// LP over (x, w) with actions frozen to v; candidates are psi_v and any
/// extra fields supplied.
FixedPolicyResult fixed_policy_lp(const ValidatedProblem& problem, double h,
                                  const PolicySpec& policy,
                                  const std::vector<Field>& extra_candidates = {},
                                  const ControlOptions& options = {});

/// CSV: x, u, w, mass for the columns with positive mass.
std::string solution_csv(const Grid& grid, const ValidatedProblem& problem,
                         const OccupationLP& lp, const Eigen::VectorXd& pi);

}  // namespace exitrate
