#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "exitrate/control.hpp"
#include "exitrate/error.hpp"

using namespace exitrate;

namespace {

Field sample(const Grid& g, const std::function<double(const Point&)>& f) {
  Field out(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) out[static_cast<Eigen::Index>(i)] = f(g.node(i));
  return out;
}

const ValidatedProblem& p3() {
  static const ValidatedProblem p = validate_problem(bang_bang());
  return p;
}

}  // namespace

TEST(Mode, ParsesBothSpellings) {
  EXPECT_EQ(parse_mode("MAX"), Mode::kMax);
  EXPECT_EQ(parse_mode("min"), Mode::kMin);
  EXPECT_THROW(parse_mode("median"), Error);
}

TEST(PolicyImprove, SingleActionIsTheOnlyPolicy) {
  const ValidatedProblem p = validate_problem(bm_interval());
  const Grid grid = build_grid(p, 0.125);
  const PolicySpec v = policy_improve(grid, p, Field::Ones(7), Mode::kMax);
  EXPECT_EQ(v, PolicySpec::uniform(7, 0));
}

TEST(PolicyImprove, PushesTowardsThePeak) {
  const Grid grid = build_grid(p3(), 0.125);
  const Field psi = sample(grid, [](const Point& x) { return std::cos(std::numbers::pi * x[0] / 2); });
  const PolicySpec v = policy_improve(grid, p3(), psi, Mode::kMax);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i)[0];
    if (x < -1e-12) EXPECT_EQ(v[i], 1u) << x;
    if (x > 1e-12) EXPECT_EQ(v[i], 0u) << x;
  }
  const PolicySpec w = policy_improve(grid, p3(), psi, Mode::kMin);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i)[0];
    if (x < -1e-12) EXPECT_EQ(w[i], 0u) << x;
    if (x > 1e-12) EXPECT_EQ(w[i], 1u) << x;
  }
}

TEST(PolicyImprove, TiesGoToTheLowestIndex) {
  const Grid grid = build_grid(p3(), 0.125);
  EXPECT_EQ(policy_improve(grid, p3(), Field::Ones(15), Mode::kMax), PolicySpec::uniform(15, 0));
  EXPECT_EQ(policy_improve(grid, p3(), Field::Ones(15), Mode::kMin), PolicySpec::uniform(15, 0));
}

TEST(PolicyImprove, InvariantUnderPositiveRescaling) {
  const Grid grid = build_grid(p3(), 1.0 / 32);
  const Field psi = sample(grid, [](const Point& x) { return std::exp(-x[0]) * (1 - x[0] * x[0]); });
  for (double s : {1e-6, 0.3, 7.0, 1e5})
    EXPECT_EQ(policy_improve(grid, p3(), psi, Mode::kMax),
              policy_improve(grid, p3(), s * psi, Mode::kMax));
}

TEST(PolicyIteration, SingleActionConvergesImmediately) {
  const ValidatedProblem p = validate_problem(bm_interval());
  const PolicyIterationTrace t = policy_iteration(p, 1.0 / 64, Mode::kMax);
  EXPECT_TRUE(t.converged);
  EXPECT_EQ(t.steps.size(), 1u);
  const Grid grid = build_grid(p, 1.0 / 64);
  EXPECT_NEAR(t.lambda(), principal_eigenpair(assemble_generator(grid, p, 0)).lambda, 1e-12);
}

TEST(PolicyIteration, MonotoneAndAFixedPoint) {
  for (const auto& entry : builtin_catalog()) {
    const ValidatedProblem p = validate_problem(entry.spec);
    const double h = p.dim() == 1 ? 1.0 / 64 : 1.0 / 16;
    const PolicyIterationTrace t = policy_iteration(p, h, Mode::kMax);
    ASSERT_TRUE(t.converged) << entry.name;
    for (std::size_t k = 1; k < t.steps.size(); ++k)
      EXPECT_LE(t.steps[k].lambda, t.steps[k - 1].lambda + 1e-12) << entry.name;
    const Grid grid = build_grid(p, h);
    EXPECT_EQ(policy_improve(grid, p, t.eigen.psi, Mode::kMax), t.policy) << entry.name;
  }
}

TEST(PolicyIteration, AgreesWithEnumeration) {
  for (double h : {0.25, 0.125}) {
    const double pi = policy_iteration(p3(), h, Mode::kMax).lambda();
    const EnumerationResult en = enumerate_policies(p3(), h);
    EXPECT_NEAR(pi, en.lambda, 1e-10) << h;
  }
  const ValidatedProblem p4 = validate_problem(rect_2d(1.0));
  const EnumerationResult en = enumerate_policies(p4, 0.25);
  EXPECT_EQ(en.evaluated, 19683u);
  EXPECT_NEAR(policy_iteration(p4, 0.25, Mode::kMax).lambda(), en.lambda, 1e-10);
}

TEST(PolicyIteration, EnumerationRefusesHugeSpaces) {
  try {
    enumerate_policies(p3(), 1.0 / 32);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(PolicyIteration, WorstCaseExceedsBestCase) {
  for (double h : {0.25, 1.0 / 64}) {
    const double best = policy_iteration(p3(), h, Mode::kMax).lambda();
    const double worst = policy_iteration(p3(), h, Mode::kMin).lambda();
    EXPECT_GT(worst, best);
  }
}

TEST(PolicyIteration, OptimalPolicyPointsInwards) {
  const Grid grid = build_grid(p3(), 1.0 / 64);
  const PolicyIterationTrace t = policy_iteration(p3(), grid, Mode::kMax);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i)[0];
    if (x < -1e-12) EXPECT_EQ(t.policy[i], 1u);
    if (x > 1e-12) EXPECT_EQ(t.policy[i], 0u);
  }
}

TEST(Hjb, ResidualShrinksWithTheSpacing) {
  const HjbConvergence c = hjb_convergence(p3(), {1.0 / 16, 1.0 / 32, 1.0 / 64}, Mode::kMax);
  ASSERT_EQ(c.levels.size(), 3u);
  EXPECT_LT(c.levels[2].sup, c.levels[0].sup);
  EXPECT_GE(c.order, 0.9);
  for (const auto& l : c.levels) EXPECT_LE(l.sup, c.constant * l.h * (1 + 1e-12));
}

TEST(FitSlope, RecoversALine) {
  EXPECT_NEAR(fit_slope({0, 1, 2, 3}, {1, 3, 5, 7}), 2.0, 1e-14);
}

TEST(PolicyIteration, TraceCsvListsEveryStep) {
  const PolicyIterationTrace t = policy_iteration(p3(), 1.0 / 16, Mode::kMax);
  const std::string csv = t.csv();
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), t.steps.size() + 1);
}
