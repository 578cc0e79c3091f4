#include "exitrate/eigenpair.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/SparseLU>

#include "exitrate/error.hpp"

namespace exitrate {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

bool reaches_all(const SparseRowMatrix& m) {
  const Eigen::Index n = m.rows();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> stack{0};
  seen[0] = 1;
  Eigen::Index count = 1;
  while (!stack.empty()) {
    Eigen::Index r = stack.back();
    stack.pop_back();
    for (SparseRowMatrix::InnerIterator it(m, r); it; ++it) {
      if (it.col() == r || it.value() == 0.0 || seen[it.col()]) continue;
      seen[it.col()] = 1;
      ++count;
      stack.push_back(it.col());
    }
  }
  return count == n;
}

struct PowerResult {
  Field x;
  double lambda;
  double residual;
  int iterations;
};

double cw_width(const Field& gx, const Field& x, double& lo) {
  lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) return std::numeric_limits<double>::infinity();
    const double r = -gx[i] / x[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi - lo;
}

// Inverse iteration for the eigenvalue of A of largest real part, A having
// nonnegative off-diagonals. `normalize_max` selects max-norm (right vector)
// versus sum-norm (left vector).
PowerResult inverse_iteration(const SparseRowMatrix& a, bool normalize_max,
                              const EigenOptions& options) {
  const Eigen::Index n = a.rows();
  const ColMatrix a_col = a;
  const double s0 = 1.0 + a.diagonal().cwiseAbs().maxCoeff();
  // Below a few ulps of the row magnitudes the residual is pure rounding; on
  // very fine grids that floor exceeds the requested tol.
  double norm = 0.0;
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    double row = 0.0;
    for (SparseRowMatrix::InnerIterator it(a, r); it; ++it) row += std::abs(it.value());
    norm = std::max(norm, row);
  }
  const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * norm;
  const ColMatrix identity = [&] {
    ColMatrix id(n, n);
    id.setIdentity();
    return id;
  }();

  Eigen::SparseLU<ColMatrix> lu;
  auto factor = [&](double mu) {
    ColMatrix m = -a_col - mu * identity;
    lu.compute(m);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorCode::kNoConvergence, "sparse LU factorization failed");
  };
  double mu = -s0;
  factor(mu);
  double factored_width = std::numeric_limits<double>::infinity();

  Field x = Field::Ones(n);
  if (!normalize_max) x /= static_cast<double>(n);
  int polish = 0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Field y = lu.solve(x);
    if (!y.allFinite())
      throw Error(ErrorCode::kNoConvergence, "inverse iteration produced non-finite values");
    x = normalize_max ? Field(y / y.maxCoeff()) : Field(y / y.sum());
    const Field ax = a * x;
    const double lambda = -x.dot(ax) / x.dot(x);
    const double residual = (ax + lambda * x).cwiseAbs().maxCoeff();
    if (residual <= std::max(options.tol, rounding * x.cwiseAbs().maxCoeff())) {
      if (++polish > 2) return {x, lambda, residual, it};
      continue;
    }
    double lo = 0.0;
    const double width = cw_width(ax, x, lo);
    if (std::isfinite(width) && width < 0.1 * factored_width) {
      const double margin = std::max(width, 1e-12 * std::max(1.0, std::abs(lo)));
      mu = lo - margin;
      factor(mu);
      factored_width = width;
    }
  }
  throw Error(ErrorCode::kNoConvergence,
              "inverse iteration did not reach tol " + std::to_string(options.tol) + " in " +
                  std::to_string(options.max_iterations) + " iterations");
}

}  // namespace

bool is_irreducible(const GeneratorMatrix& g) {
  if (g.size() <= 1) return true;
  SparseRowMatrix t = g.entries.transpose();
  return reaches_all(g.entries) && reaches_all(t);
}

std::array<double, 2> cw_bounds(const GeneratorMatrix& g, const Field& psi) {
  if ((psi.array() <= 0.0).any())
    throw Error(ErrorCode::kInvalidArgument, "Collatz-Wielandt bounds need a positive vector");
  const Field gx = g.entries * psi;
  const Eigen::ArrayXd ratio = -gx.array() / psi.array();
  return {ratio.minCoeff(), ratio.maxCoeff()};
}

EigenPair principal_eigenpair(const GeneratorMatrix& g, const EigenOptions& options) {
  if (g.size() == 0) throw Error(ErrorCode::kInvalidArgument, "empty generator");
  if (!is_irreducible(g))
    throw Error(ErrorCode::kReducible, "generator sparsity pattern is not strongly connected");

  const PowerResult right = inverse_iteration(g.entries, true, options);
  SparseRowMatrix gt = g.entries.transpose();
  const PowerResult left = inverse_iteration(gt, false, options);

  if ((right.x.array() <= 0.0).any() || (left.x.array() <= 0.0).any())
    throw Error(ErrorCode::kNonPositiveEigenvector,
                "principal eigenvector has a nonpositive entry");

  EigenPair pair;
  pair.lambda = right.lambda;
  pair.psi = right.x;
  pair.phi = left.x;
  pair.residual = right.residual;
  pair.left_residual = (gt * pair.phi + pair.lambda * pair.phi).cwiseAbs().maxCoeff();
  pair.cw = cw_bounds(g, pair.psi);
  pair.iterations = right.iterations + left.iterations;
  return pair;
}

std::string eigenpair_csv(const Grid& grid, const EigenPair& pair) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << (grid.dim() == 1 ? "x" : "x1,x2") << ",psi,phi\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.node(i);
    os << x[0];
    if (grid.dim() == 2) os << ',' << x[1];
    os << ',' << pair.psi[static_cast<Eigen::Index>(i)] << ','
       << pair.phi[static_cast<Eigen::Index>(i)] << '\n';
  }
  return os.str();
}

}  // namespace exitrate
