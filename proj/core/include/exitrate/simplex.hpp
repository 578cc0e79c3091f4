#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace exitrate {

/// min c^T x subject to A x = b, x >= 0.
struct LinearProgram {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<std::string> row_names;
  std::vector<std::string> column_names;
};

inline constexpr std::size_t kMaxLpColumns = 50000;

struct LpSolution {
  double value = 0.0;
  Eigen::VectorXd x;
  /// Dual multipliers y with c - A^T y >= 0 at optimality.
  Eigen::VectorXd duals;
  Eigen::VectorXd reduced_costs;
  /// Basic column per retained row; rows found redundant are listed apart.
  std::vector<std::size_t> basis;
  std::vector<std::size_t> redundant_rows;
  /// ||A x - b||_inf, max_j |x_j r_j|, max_j max(-r_j, 0).
  double feasibility_residual = 0.0;
  double complementary_slackness = 0.0;
  double dual_infeasibility = 0.0;
  std::size_t pivots = 0;
};

/// Two-phase primal simplex on a dense tableau with Bland's rule.
/// Throws Infeasible, Unbounded, or TooLarge (more than kMaxLpColumns).
LpSolution solve_lp(const LinearProgram& lp);

/// Fixed-column MPS.
std::string to_mps(const LinearProgram& lp, const std::string& name);

}  // namespace exitrate
