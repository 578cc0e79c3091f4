#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Core>

namespace exitrate {

/// Points and vectors live in R^d with d in {1, 2}; the second slot is
/// unused (zero) for one-dimensional problems.
using Point = std::array<double, 2>;
using Vec2 = std::array<double, 2>;

/// Scalar field on the interior nodes of a grid.
using Field = Eigen::VectorXd;

inline constexpr int kMaxDim = 2;

}  // namespace exitrate
