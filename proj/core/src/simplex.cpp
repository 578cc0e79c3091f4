#include "exitrate/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "exitrate/error.hpp"

namespace exitrate {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;

// Tableau rows 0..m-1 hold [B^-1 A | B^-1 b]; row m holds reduced costs and
// minus the objective. Columns n..n+m-1 are the artificials.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
      : m_(a.rows()), n_(a.cols()), t_(Eigen::MatrixXd::Zero(m_ + 1, n_ + m_ + 1)) {
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double s = b[i] < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = s * a.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, n_ + m_) = s * b[i];
      basis_.push_back(n_ + i);
    }
    active_.assign(static_cast<std::size_t>(m_), true);
  }

  void set_objective(const Eigen::VectorXd& cost_full) {
    t_.row(m_).setZero();
    t_.row(m_).head(n_ + m_) = cost_full.transpose();
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (!active_[static_cast<std::size_t>(i)]) continue;
      const double cb = cost_full[basis_[static_cast<std::size_t>(i)]];
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  // Runs Bland's rule over columns < enterable. Returns false if unbounded.
  bool optimize(Eigen::Index enterable, std::size_t& pivots) {
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < enterable; ++j)
        if (t_(m_, j) < -kCostTol) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (!active_[static_cast<std::size_t>(i)] || t_(i, enter) <= kPivotTol) continue;
        const double ratio = t_(i, n_ + m_) / t_(i, enter);
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i <= m_; ++i)
      if (i != row && t_(i, col) != 0.0) t_.row(i) -= t_(i, col) * t_.row(row);
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // After phase I: drive zero-level artificials out of the basis, marking
  // rows with no usable pivot as redundant.
  void purge_artificials(std::size_t& pivots) {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      Eigen::Index col = -1;
      double best = kPivotTol;
      for (Eigen::Index j = 0; j < n_; ++j)
        if (std::abs(t_(i, j)) > best) {
          best = std::abs(t_(i, j));
          col = j;
        }
      if (col >= 0) {
        pivot(i, col);
        ++pivots;
      } else {
        active_[static_cast<std::size_t>(i)] = false;
      }
    }
  }

  double objective() const { return -t_(m_, n_ + m_); }
  Eigen::Index rows() const { return m_; }
  const Eigen::MatrixXd& table() const { return t_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  bool active(Eigen::Index i) const { return active_[static_cast<std::size_t>(i)]; }

 private:
  Eigen::Index m_;
  Eigen::Index n_;
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> active_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const Eigen::Index m = lp.A.rows();
  const Eigen::Index n = lp.A.cols();
  if (static_cast<std::size_t>(n) > kMaxLpColumns)
    throw Error(ErrorCode::kTooLarge, "LP has " + std::to_string(n) + " columns");
  if (lp.b.size() != m || lp.c.size() != n)
    throw Error(ErrorCode::kInvalidArgument, "LP dimensions are inconsistent");

  Tableau tab(lp.A, lp.b);
  LpSolution sol;

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  tab.set_objective(phase1);
  tab.optimize(n, sol.pivots);
  const double scale = std::max(1.0, lp.b.cwiseAbs().maxCoeff());
  if (tab.objective() > 1e-9 * scale)
    throw Error(ErrorCode::kInfeasible,
                "phase I ended with infeasibility " + std::to_string(tab.objective()));
  tab.purge_artificials(sol.pivots);

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = lp.c;
  tab.set_objective(phase2);
  if (!tab.optimize(n, sol.pivots))
    throw Error(ErrorCode::kUnbounded, "objective is unbounded below");

  const Eigen::MatrixXd& t = tab.table();
  sol.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!tab.active(i)) {
      sol.redundant_rows.push_back(static_cast<std::size_t>(i));
      continue;
    }
    const Eigen::Index j = tab.basis()[static_cast<std::size_t>(i)];
    sol.basis.push_back(static_cast<std::size_t>(j));
    if (j < n) sol.x[j] = std::max(0.0, t(i, n + m));
  }
  sol.value = lp.c.dot(sol.x);
  // The reduced cost of artificial i is -y_i (up to the sign flip of row i).
  sol.duals.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = lp.b[i] < 0.0 ? -1.0 : 1.0;
    sol.duals[i] = tab.active(i) ? -s * t(m, n + i) : 0.0;
  }
  sol.reduced_costs = lp.c - lp.A.transpose() * sol.duals;
  sol.feasibility_residual = (lp.A * sol.x - lp.b).cwiseAbs().maxCoeff();
  sol.complementary_slackness = sol.x.cwiseProduct(sol.reduced_costs).cwiseAbs().maxCoeff();
  sol.dual_infeasibility = std::max(0.0, -sol.reduced_costs.minCoeff());
  return sol;
}

std::string to_mps(const LinearProgram& lp, const std::string& name) {
  auto row_name = [&](Eigen::Index i) {
    return static_cast<std::size_t>(i) < lp.row_names.size() ? lp.row_names[static_cast<std::size_t>(i)]
                                                             : "R" + std::to_string(i);
  };
  auto col_name = [&](Eigen::Index j) {
    return static_cast<std::size_t>(j) < lp.column_names.size()
               ? lp.column_names[static_cast<std::size_t>(j)]
               : "C" + std::to_string(j);
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  char line[128];
  std::ostringstream os;
  os << "NAME          " << name << "\nROWS\n N  COST\n";
  for (Eigen::Index i = 0; i < lp.A.rows(); ++i) os << " E  " << row_name(i) << '\n';
  os << "COLUMNS\n";
  for (Eigen::Index j = 0; j < lp.A.cols(); ++j) {
    if (lp.c[j] != 0.0) {
      std::snprintf(line, sizeof line, "    %-8s  %-8s  %12s\n", col_name(j).c_str(), "COST",
                    num(lp.c[j]).c_str());
      os << line;
    }
    for (Eigen::Index i = 0; i < lp.A.rows(); ++i)
      if (lp.A(i, j) != 0.0) {
        std::snprintf(line, sizeof line, "    %-8s  %-8s  %12s\n", col_name(j).c_str(),
                      row_name(i).c_str(), num(lp.A(i, j)).c_str());
        os << line;
      }
  }
  os << "RHS\n";
  for (Eigen::Index i = 0; i < lp.b.size(); ++i)
    if (lp.b[i] != 0.0) {
      std::snprintf(line, sizeof line, "    %-8s  %-8s  %12s\n", "RHS", row_name(i).c_str(),
                    num(lp.b[i]).c_str());
      os << line;
    }
  os << "ENDATA\n";
  return os.str();
}

}  // namespace exitrate
