#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "exitrate/problem.hpp"
#include "exitrate/types.hpp"

namespace exitrate {

/// Uniform lattice of interior nodes of a box, spacing h on every axis.
/// Nodes are ordered with the first axis varying fastest.
class Grid {
 public:
  Grid() = default;
  Grid(const Box& domain, double h);

  const Box& domain() const { return domain_; }
  int dim() const { return domain_.dim; }
  double h() const { return h_; }
  std::size_t size() const { return size_; }
  /// Interior node count along an axis (one for an unused second axis).
  int count(int axis) const { return counts_[axis]; }

  Point node(std::size_t i) const;
  std::array<int, 2> multi_index(std::size_t i) const;
  std::size_t flat_index(int i0, int i1 = 0) const;

  /// Index of the neighbour in direction `dir` (+1/-1) along `axis`, or -1
  /// when that lattice point lies on the boundary.
  long neighbor(std::size_t i, int axis, int dir) const;
  bool boundary_adjacent(std::size_t i) const;

  /// Distance from node i to the boundary, measured per axis.
  double boundary_distance(std::size_t i) const;
  /// Nodes with boundary_distance > eps (the discrete D_eps).
  std::vector<bool> layer_mask(double eps) const;

  /// Nearest node to an arbitrary point (clamped to the interior lattice).
  std::size_t nearest(const Point& x) const;

 private:
  Box domain_;
  double h_ = 0.0;
  std::array<int, 2> counts_{0, 1};
  std::size_t size_ = 0;
};

/// Throws NonconformingSpacing unless h divides every side length.
Grid build_grid(const ValidatedProblem& problem, double h);
Grid build_grid(const Box& domain, double h);

/// Default spacings: 1/64 in one dimension, 1/32 in two.
double default_spacing(int dim);

/// Boundary rule for discrete gradients at boundary-adjacent nodes.
enum class Extension {
  /// One-sided difference into the interior.
  kOneSided,
  /// The field tends to -inf at the boundary (a log-eigenfunction); handled
  /// as kOneSided.
  kLogZero,
  /// The field is zero on the boundary; central difference with that value.
  kDirichletZero,
};

/// Central differences where both neighbours are interior, otherwise the
/// extension rule.
std::vector<Vec2> discrete_gradient(const Grid& grid, const Field& field, Extension extension);

/// Restriction of a field on `fine` to the nodes of `coarse` when the coarse
/// lattice is a subset of the fine one (same h, smaller box).
Field restrict_to(const Grid& fine, const Field& field, const Grid& coarse);

}  // namespace exitrate
