#include "exitrate/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exitrate/error.hpp"

namespace exitrate {

namespace {

int intervals(double side, double h) {
  const double ratio = side / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw Error(ErrorCode::kNonconformingSpacing,
                "h = " + std::to_string(h) + " does not divide side length " +
                    std::to_string(side));
  return static_cast<int>(rounded);
}

}  // namespace

Grid::Grid(const Box& domain, double h) : domain_(domain), h_(h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(ErrorCode::kNonconformingSpacing, "h must be positive");
  for (int k = 0; k < domain.dim; ++k) {
    counts_[k] = intervals(domain.side(k), h) - 1;
    if (counts_[k] < 1)
      throw Error(ErrorCode::kNonconformingSpacing, "grid has no interior nodes");
  }
  if (domain.dim == 1) counts_[1] = 1;
  size_ = static_cast<std::size_t>(counts_[0]) * static_cast<std::size_t>(counts_[1]);
}

Point Grid::node(std::size_t i) const {
  auto mi = multi_index(i);
  Point x{0.0, 0.0};
  for (int k = 0; k < dim(); ++k) x[k] = domain_.lo[k] + h_ * (mi[k] + 1);
  return x;
}

std::array<int, 2> Grid::multi_index(std::size_t i) const {
  return {static_cast<int>(i % counts_[0]), static_cast<int>(i / counts_[0])};
}

std::size_t Grid::flat_index(int i0, int i1) const {
  return static_cast<std::size_t>(i1) * counts_[0] + static_cast<std::size_t>(i0);
}

long Grid::neighbor(std::size_t i, int axis, int dir) const {
  auto mi = multi_index(i);
  mi[axis] += dir;
  if (mi[axis] < 0 || mi[axis] >= counts_[axis]) return -1;
  return static_cast<long>(flat_index(mi[0], mi[1]));
}

bool Grid::boundary_adjacent(std::size_t i) const {
  for (int k = 0; k < dim(); ++k)
    if (neighbor(i, k, -1) < 0 || neighbor(i, k, +1) < 0) return true;
  return false;
}

double Grid::boundary_distance(std::size_t i) const {
  auto mi = multi_index(i);
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dim(); ++k)
    d = std::min(d, h_ * std::min(mi[k] + 1, counts_[k] - mi[k]));
  return d;
}

std::vector<bool> Grid::layer_mask(double eps) const {
  std::vector<bool> mask(size_);
  for (std::size_t i = 0; i < size_; ++i) mask[i] = boundary_distance(i) > eps + 1e-12 * h_;
  return mask;
}

std::size_t Grid::nearest(const Point& x) const {
  std::array<int, 2> mi{0, 0};
  for (int k = 0; k < dim(); ++k) {
    long j = std::lround((x[k] - domain_.lo[k]) / h_) - 1;
    mi[k] = static_cast<int>(std::clamp<long>(j, 0, counts_[k] - 1));
  }
  return flat_index(mi[0], mi[1]);
}

Grid build_grid(const ValidatedProblem& problem, double h) { return Grid(problem.domain(), h); }

Grid build_grid(const Box& domain, double h) { return Grid(domain, h); }

double default_spacing(int dim) { return dim == 1 ? 1.0 / 64.0 : 1.0 / 32.0; }

std::vector<Vec2> discrete_gradient(const Grid& grid, const Field& field, Extension extension) {
  const double h = grid.h();
  std::vector<Vec2> g(grid.size(), Vec2{0.0, 0.0});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int k = 0; k < grid.dim(); ++k) {
      const long lo = grid.neighbor(i, k, -1);
      const long hi = grid.neighbor(i, k, +1);
      if (lo >= 0 && hi >= 0) {
        g[i][k] = (field[hi] - field[lo]) / (2.0 * h);
      } else if (extension == Extension::kDirichletZero) {
        const double f_lo = lo >= 0 ? field[lo] : 0.0;
        const double f_hi = hi >= 0 ? field[hi] : 0.0;
        g[i][k] = (f_hi - f_lo) / (2.0 * h);
      } else if (hi >= 0) {
        g[i][k] = (field[hi] - field[i]) / h;
      } else if (lo >= 0) {
        g[i][k] = (field[i] - field[lo]) / h;
      }
    }
  }
  return g;
}

Field restrict_to(const Grid& fine, const Field& field, const Grid& coarse) {
  Field out(coarse.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) out[i] = field[fine.nearest(coarse.node(i))];
  return out;
}

}  // namespace exitrate
