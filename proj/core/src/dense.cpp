#include "exitrate/dense.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

#include "exitrate/error.hpp"

namespace exitrate {

Eigen::MatrixXd to_dense(const GeneratorMatrix& g) {
  if (g.size() > kMaxDenseNodes)
    throw Error(ErrorCode::kTooLargeForDense, std::to_string(g.size()) + " nodes exceeds " +
                                                  std::to_string(kMaxDenseNodes));
  return Eigen::MatrixXd(g.entries);
}

Eigen::MatrixXd semigroup(const Eigen::MatrixXd& a, double t) {
  const Eigen::Index n = a.rows();
  if (t == 0.0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd scaled = t * a;
  return scaled.exp();
}

Eigen::VectorXd gth_stationary(const Eigen::MatrixXd& q) {
  const Eigen::Index n = q.rows();
  Eigen::MatrixXd p = q;
  for (Eigen::Index i = 0; i < n; ++i) p(i, i) = 0.0;
  for (Eigen::Index k = n - 1; k > 0; --k) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) s += p(k, j);
    if (!(s > 0.0))
      throw Error(ErrorCode::kNullVectorNotUnique,
                  "state reduction found a closed class; stationary vector is not unique");
    for (Eigen::Index i = 0; i < k; ++i) p(i, k) /= s;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double pik = p(i, k);
      if (pik == 0.0) continue;
      for (Eigen::Index j = 0; j < k; ++j) p(i, j) += pik * p(k, j);
    }
  }
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(n);
  pi[0] = 1.0;
  for (Eigen::Index k = 1; k < n; ++k) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) s += pi[i] * p(i, k);
    pi[k] = s;
  }
  return pi / pi.sum();
}

Eigen::VectorXd stationary_distribution(const GeneratorMatrix& q) {
  const std::size_t n = q.size();
  if (n <= kMaxDenseNodes) return gth_stationary(Eigen::MatrixXd(q.entries));

  using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
  ColMatrix a = q.entries.transpose();
  const Eigen::Index last = static_cast<Eigen::Index>(n) - 1;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros()) + n);
  for (Eigen::Index c = 0; c < a.outerSize(); ++c)
    for (ColMatrix::InnerIterator it(a, c); it; ++it)
      if (it.row() != last) trip.emplace_back(it.row(), it.col(), it.value());
  for (Eigen::Index c = 0; c <= last; ++c) trip.emplace_back(last, c, 1.0);
  ColMatrix m(a.rows(), a.cols());
  m.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<ColMatrix> lu(m);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorCode::kNullVectorNotUnique, "stationarity system is singular");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows());
  rhs[last] = 1.0;
  Eigen::VectorXd pi = lu.solve(rhs);
  if (!pi.allFinite())
    throw Error(ErrorCode::kNullVectorNotUnique, "stationarity system is singular");
  pi = pi.cwiseMax(0.0);
  return pi / pi.sum();
}

std::vector<double> decay_rates(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::kNoConvergence, "dense eigendecomposition failed");
  std::vector<double> rates;
  rates.reserve(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) rates.push_back(-solver.eigenvalues()[i].real());
  std::sort(rates.begin(), rates.end());
  return rates;
}

}  // namespace exitrate
