#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "exitrate/generator.hpp"

namespace exitrate {

/// Largest matrix converted to dense form by the verification routines.
inline constexpr std::size_t kMaxDenseNodes = 2000;

/// Throws TooLargeForDense above kMaxDenseNodes.
Eigen::MatrixXd to_dense(const GeneratorMatrix& g);

/// exp(t A) by Pade scaling-and-squaring.
Eigen::MatrixXd semigroup(const Eigen::MatrixXd& a, double t);

/// Stationary distribution of a conservative generator by the
/// Grassmann-Taksar-Heyman state reduction (subtraction-free).
/// Throws NullVectorNotUnique if the chain splits.
Eigen::VectorXd gth_stationary(const Eigen::MatrixXd& q);

/// Stationary distribution of a conservative sparse generator: dense GTH up
/// to kMaxDenseNodes, sparse LU with a normalization row above.
Eigen::VectorXd stationary_distribution(const GeneratorMatrix& q);

/// -Re(eigenvalues of A) in increasing order.
std::vector<double> decay_rates(const Eigen::MatrixXd& a);

}  // namespace exitrate
