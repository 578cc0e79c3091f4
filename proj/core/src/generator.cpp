#include "exitrate/generator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "exitrate/error.hpp"

namespace exitrate {

Eigen::VectorXd GeneratorMatrix::row_sums() const {
  return entries * Eigen::VectorXd::Ones(entries.cols());
}

GeneratorMatrix assemble_from_coefficients(
    const Grid& grid, const std::function<NodeCoefficients(std::size_t)>& coefficients,
    const AssemblyOptions& options) {
  const std::size_t n = grid.size();
  const double h = grid.h();
  const double h2 = h * h;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(n * (2 * grid.dim() + 1));
  Eigen::VectorXd killing = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));

  for (std::size_t i = 0; i < n; ++i) {
    const NodeCoefficients c = coefficients(i);
    double total = 0.0;
    for (int k = 0; k < grid.dim(); ++k) {
      const double a = c.diffusion[k];
      const double m = c.drift[k];
      double up = 0.5 * a / h2;
      double down = up;
      if (options.scheme == DriftScheme::kHybrid && std::abs(m) * h <= a) {
        up += 0.5 * m / h;
        down -= 0.5 * m / h;
      } else {
        up += std::max(m, 0.0) / h;
        down += std::max(-m, 0.0) / h;
      }
      const double rates[2] = {down, up};
      const int dirs[2] = {-1, +1};
      for (int s = 0; s < 2; ++s) {
        total += rates[s];
        const long j = grid.neighbor(i, k, dirs[s]);
        if (j < 0) {
          killing[static_cast<Eigen::Index>(i)] += rates[s];
        } else if (rates[s] != 0.0) {
          triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), rates[s]);
        }
      }
    }
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), -total);
  }

  GeneratorMatrix g;
  g.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  g.entries.setFromTriplets(triplets.begin(), triplets.end());
  g.entries.makeCompressed();
  g.killing = std::move(killing);
  return g;
}

GeneratorMatrix assemble_generator(const Grid& grid, const ValidatedProblem& problem,
                                   const PolicySpec& policy, const AssemblyOptions& options) {
  check_policy(policy, grid.size(), problem.num_actions());
  return assemble_from_coefficients(
      grid,
      [&](std::size_t i) {
        const Point x = grid.node(i);
        return NodeCoefficients{problem.diffusion(x), problem.drift(x, policy[i])};
      },
      options);
}

GeneratorMatrix assemble_generator(const Grid& grid, const ValidatedProblem& problem,
                                   std::size_t action, const AssemblyOptions& options) {
  return assemble_generator(grid, problem, PolicySpec::uniform(grid.size(), action), options);
}

GeneratorMatrix with_potential(const GeneratorMatrix& g, const Field& potential) {
  if (static_cast<std::size_t>(potential.size()) != g.size())
    throw Error(ErrorCode::kInvalidArgument, "potential size does not match generator");
  GeneratorMatrix out = g;
  for (Eigen::Index i = 0; i < potential.size(); ++i) out.entries.coeffRef(i, i) -= potential[i];
  out.killing += potential;
  return out;
}

GeneratorMatrix generator_from_dense(const Eigen::MatrixXd& dense) {
  GeneratorMatrix g;
  g.entries = dense.sparseView(0.0, 0.0);
  for (Eigen::Index i = 0; i < dense.rows(); ++i)
    if (g.entries.coeff(i, i) == 0.0) g.entries.coeffRef(i, i) = 0.0;
  g.entries.makeCompressed();
  g.killing = -dense.rowwise().sum();
  return g;
}

std::vector<RowEntry> off_diagonal_row(const GeneratorMatrix& g, std::size_t row) {
  std::vector<RowEntry> out;
  for (SparseRowMatrix::InnerIterator it(g.entries, static_cast<Eigen::Index>(row)); it; ++it)
    if (static_cast<std::size_t>(it.col()) != row)
      out.push_back({static_cast<std::size_t>(it.col()), it.value()});
  return out;
}

std::string to_triplets(const GeneratorMatrix& g) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < g.entries.outerSize(); ++r)
    for (SparseRowMatrix::InnerIterator it(g.entries, r); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  return os.str();
}

}  // namespace exitrate
