#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "exitrate/generator.hpp"
#include "exitrate/grid.hpp"
#include "exitrate/problem.hpp"
#include "exitrate/control.hpp"

using namespace exitrate;

namespace {

constexpr double kPi = std::numbers::pi;

double entry(const GeneratorMatrix& g, std::size_t i, std::size_t j) {
  return g.entries.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

Field sample(const Grid& g, const std::function<double(const Point&)>& f) {
  Field out(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) out[static_cast<Eigen::Index>(i)] = f(g.node(i));
  return out;
}

double min_off_diagonal(const GeneratorMatrix& g) {
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < g.entries.outerSize(); ++r)
    for (SparseRowMatrix::InnerIterator it(g.entries, r); it; ++it)
      if (it.col() != r) m = std::min(m, it.value());
  return m;
}

}  // namespace

TEST(Generator, BrownianStencilAtQuarterSpacing) {
  const ValidatedProblem p = validate_problem(bm_interval());
  const Grid grid = build_grid(p, 0.25);
  const GeneratorMatrix g = assemble_generator(grid, p, 0);
  EXPECT_DOUBLE_EQ(entry(g, 1, 0), 8.0);
  EXPECT_DOUBLE_EQ(entry(g, 1, 2), 8.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(entry(g, i, i), -16.0);
  const Eigen::VectorXd rs = g.row_sums();
  EXPECT_DOUBLE_EQ(rs[0], -8.0);
  EXPECT_DOUBLE_EQ(rs[1], 0.0);
  EXPECT_DOUBLE_EQ(rs[2], -8.0);
  EXPECT_DOUBLE_EQ(g.killing[0], 8.0);
}

TEST(Generator, UpwindDriftStencil) {
  const ValidatedProblem p = validate_problem(drift_interval(1.0));
  const Grid grid = build_grid(p, 0.25);
  const GeneratorMatrix g = assemble_generator(grid, p, 0, {DriftScheme::kUpwind});
  EXPECT_DOUBLE_EQ(entry(g, 1, 2), 12.0);
  EXPECT_DOUBLE_EQ(entry(g, 1, 0), 8.0);
  EXPECT_DOUBLE_EQ(entry(g, 1, 1), -20.0);
}

TEST(Generator, HybridUsesCentralDriftWhenItStaysMonotone) {
  const ValidatedProblem p = validate_problem(drift_interval(1.0));
  const Grid grid = build_grid(p, 0.25);
  const GeneratorMatrix g = assemble_generator(grid, p, 0);
  EXPECT_DOUBLE_EQ(entry(g, 1, 2), 10.0);
  EXPECT_DOUBLE_EQ(entry(g, 1, 0), 6.0);
  EXPECT_DOUBLE_EQ(entry(g, 1, 1), -16.0);

  // Large drift relative to the diffusion falls back to upwind.
  const ValidatedProblem fast = validate_problem(drift_interval(20.0));
  const GeneratorMatrix gf = assemble_generator(grid, fast, 0);
  EXPECT_DOUBLE_EQ(entry(gf, 1, 2), 88.0);
  EXPECT_DOUBLE_EQ(entry(gf, 1, 0), 8.0);
}

TEST(Generator, ZeroDriftIsPolicyIndependent) {
  const ValidatedProblem p = validate_problem(bm_interval());
  const Grid grid = build_grid(p, 1.0 / 16);
  const GeneratorMatrix a = assemble_generator(grid, p, 0);
  const GeneratorMatrix b = assemble_generator(grid, p, PolicySpec::uniform(grid.size(), 0));
  EXPECT_EQ((Eigen::MatrixXd(a.entries) - Eigen::MatrixXd(b.entries)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Generator, MonotoneAndConservativeOnEveryCatalogProblem) {
  for (const auto& entry_ : builtin_catalog()) {
    const ValidatedProblem p = validate_problem(entry_.spec);
    for (double h : {0.25, 0.125, 1.0 / 32}) {
      const Grid grid = build_grid(p, h);
      for (auto scheme : {DriftScheme::kHybrid, DriftScheme::kUpwind})
        for (std::size_t u = 0; u < p.num_actions(); ++u) {
          const GeneratorMatrix g = assemble_generator(grid, p, u, {scheme});
          EXPECT_GE(min_off_diagonal(g), 0.0) << entry_.name;
          const double scale = g.entries.diagonal().cwiseAbs().maxCoeff();
          EXPECT_LE((g.row_sums() + g.killing).cwiseAbs().maxCoeff(), 1e-13 * scale);
          EXPECT_GE(g.killing.minCoeff(), 0.0);
        }
    }
  }
}

TEST(Generator, QuadraticIsReproducedAwayFromTheBoundary) {
  const ValidatedProblem p = validate_problem(bm_interval());
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const Grid grid = build_grid(p, h);
    const Field gf = assemble_generator(grid, p, 0).apply(sample(grid, [](const Point& x) { return x[0] * x[0]; }));
    for (std::size_t i = 1; i + 1 < grid.size(); ++i)
      EXPECT_NEAR(gf[static_cast<Eigen::Index>(i)], 1.0, 1e-8);
  }
}

TEST(Generator, SecondOrderConsistencyOnTheEigenfunction) {
  const ValidatedProblem p = validate_problem(bm_interval());
  std::vector<double> lx, ly;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const Grid grid = build_grid(p, h);
    const Field f = sample(grid, [](const Point& x) { return std::sin(kPi * x[0]); });
    const Field err = assemble_generator(grid, p, 0).apply(f) + 0.5 * kPi * kPi * f;
    lx.push_back(std::log(h));
    ly.push_back(std::log(err.cwiseAbs().maxCoeff()));
  }
  EXPECT_GE(fit_slope(lx, ly), 1.9);
}

TEST(Generator, TwoDimensionalRowStructure) {
  const ValidatedProblem p = validate_problem(rect_2d(1.0, true));
  const Grid grid = build_grid(p, 0.25);
  const GeneratorMatrix g = assemble_generator(grid, p, 0);
  const std::size_t centre = grid.flat_index(1, 1);
  EXPECT_EQ(off_diagonal_row(g, centre).size(), 4u);
  EXPECT_DOUBLE_EQ(entry(g, centre, centre), -32.0);
  EXPECT_DOUBLE_EQ(g.killing[static_cast<Eigen::Index>(grid.flat_index(0, 0))], 16.0);
}

TEST(Generator, PotentialAddsKilling) {
  const ValidatedProblem p = validate_problem(bm_interval());
  const Grid grid = build_grid(p, 0.25);
  const GeneratorMatrix g = assemble_generator(grid, p, 0);
  const GeneratorMatrix v = with_potential(g, Field::Constant(3, 2.0));
  EXPECT_DOUBLE_EQ(entry(v, 1, 1), -18.0);
  EXPECT_DOUBLE_EQ(v.killing[1], 2.0);
  EXPECT_LE((v.row_sums() + v.killing).cwiseAbs().maxCoeff(), 1e-14);
}
