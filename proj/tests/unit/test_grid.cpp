#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "exitrate/error.hpp"
#include "exitrate/grid.hpp"
#include "exitrate/problem.hpp"

using namespace exitrate;

namespace {

const Box kUnit{1, {0.0, 0.0}, {1.0, 0.0}};
const Box kSquare{2, {0.0, 0.0}, {1.0, 1.0}};

Field sample(const Grid& g, const std::function<double(const Point&)>& f) {
  Field out(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) out[static_cast<Eigen::Index>(i)] = f(g.node(i));
  return out;
}

}  // namespace

TEST(Grid, InteriorNodeCounts) {
  const Grid line = build_grid(kUnit, 0.25);
  ASSERT_EQ(line.size(), 3u);
  EXPECT_DOUBLE_EQ(line.node(0)[0], 0.25);
  EXPECT_DOUBLE_EQ(line.node(2)[0], 0.75);
  EXPECT_EQ(build_grid(kSquare, 0.25).size(), 9u);
}

TEST(Grid, SpacingMustDivideTheSides) {
  EXPECT_EQ(build_grid(kUnit, 1.0 / 3.0).size(), 2u);
  try {
    build_grid(kUnit, 0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonconformingSpacing);
  }
}

TEST(Grid, IndexingRoundTrips) {
  const Grid g = build_grid(Box{2, {0, 0}, {1, 0.5}}, 0.125);
  EXPECT_EQ(g.count(0), 7);
  EXPECT_EQ(g.count(1), 3);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto mi = g.multi_index(i);
    EXPECT_EQ(g.flat_index(mi[0], mi[1]), i);
    EXPECT_EQ(g.nearest(g.node(i)), i);
  }
  EXPECT_EQ(g.neighbor(0, 0, -1), -1);
  EXPECT_EQ(g.neighbor(0, 1, +1), static_cast<long>(g.flat_index(0, 1)));
  EXPECT_TRUE(g.boundary_adjacent(0));
  EXPECT_FALSE(g.boundary_adjacent(g.flat_index(3, 1)));
}

TEST(Grid, DefaultSpacings) {
  EXPECT_DOUBLE_EQ(default_spacing(1), 1.0 / 64);
  EXPECT_DOUBLE_EQ(default_spacing(2), 1.0 / 32);
}

TEST(Grid, LayerMaskExcludesNodesNearTheBoundary) {
  const Grid g = build_grid(kUnit, 0.125);
  const auto mask = g.layer_mask(0.2);
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_EQ(mask[i], g.boundary_distance(i) > 0.2) << i;
}

TEST(Gradient, ConstantFieldHasZeroGradient) {
  const Grid g = build_grid(kSquare, 0.125);
  const auto grad = discrete_gradient(g, Field::Constant(static_cast<Eigen::Index>(g.size()), 3.0),
                                      Extension::kOneSided);
  for (const auto& v : grad) {
    EXPECT_EQ(v[0], 0.0);
    EXPECT_EQ(v[1], 0.0);
  }
}

TEST(Gradient, LinearFieldIsExact) {
  const Grid g = build_grid(kUnit, 0.125);
  const auto grad = discrete_gradient(g, sample(g, [](const Point& x) { return x[0]; }),
                                      Extension::kOneSided);
  for (const auto& v : grad) EXPECT_NEAR(v[0], 1.0, 1e-13);
  const auto dz = discrete_gradient(g, sample(g, [](const Point& x) { return x[0]; }),
                                    Extension::kDirichletZero);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) EXPECT_NEAR(dz[i][0], 1.0, 1e-13);
}

TEST(Gradient, LogSineIsFlatAtTheCentre) {
  const Grid g = build_grid(kUnit, 1.0 / 64);
  const auto grad = discrete_gradient(
      g, sample(g, [](const Point& x) { return std::log(std::sin(std::numbers::pi * x[0])); }),
      Extension::kLogZero);
  EXPECT_NEAR(grad[g.nearest({0.5, 0})][0], 0.0, 1e-6);
}

TEST(Grid, RestrictionPicksSharedNodes) {
  const Grid fine = build_grid(Box{1, {-0.25, 0}, {1.25, 0}}, 0.125);
  const Grid coarse = build_grid(kUnit, 0.125);
  const Field f = sample(fine, [](const Point& x) { return x[0] * x[0]; });
  const Field r = restrict_to(fine, f, coarse);
  for (std::size_t i = 0; i < coarse.size(); ++i)
    EXPECT_NEAR(r[static_cast<Eigen::Index>(i)], coarse.node(i)[0] * coarse.node(i)[0], 1e-14);
}
