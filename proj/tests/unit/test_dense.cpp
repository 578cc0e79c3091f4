#include <gtest/gtest.h>

#include "exitrate/dense.hpp"
#include "exitrate/error.hpp"
#include "exitrate/generator.hpp"
#include "exitrate/problem.hpp"

using namespace exitrate;

TEST(Dense, GthMatchesATwoStateChain) {
  Eigen::MatrixXd q(2, 2);
  q << -1, 1, 3, -3;
  const Eigen::VectorXd pi = gth_stationary(q);
  EXPECT_NEAR(pi[0], 0.75, 1e-15);
  EXPECT_NEAR(pi[1], 0.25, 1e-15);
}

TEST(Dense, GthSolvesABirthDeathChain) {
  const int n = 6;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    q(i, i + 1) = 2.0;
    q(i + 1, i) = 1.0;
  }
  for (int i = 0; i < n; ++i) q(i, i) = -q.row(i).sum();
  const Eigen::VectorXd pi = gth_stationary(q);
  EXPECT_NEAR(pi.sum(), 1.0, 1e-14);
  EXPECT_LE((q.transpose() * pi).cwiseAbs().maxCoeff(), 1e-14);
  for (int i = 0; i + 1 < n; ++i) EXPECT_NEAR(pi[i + 1] / pi[i], 2.0, 1e-12);
}

TEST(Dense, DisconnectedChainHasNoUniqueStationaryLaw) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(3, 3);
  q << -1, 1, 0, 1, -1, 0, 0, 0, 0;
  try {
    gth_stationary(q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNullVectorNotUnique);
  }
}

TEST(Dense, SparseAndDenseStationarySolversAgree) {
  const int n = 40;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    q(i, (i + 1) % n) = 1.0 + 0.1 * i;
    q(i, (i + 3) % n) = 0.5;
  }
  for (int i = 0; i < n; ++i) q(i, i) = -q.row(i).sum();
  const Eigen::VectorXd a = gth_stationary(q);
  const Eigen::VectorXd b = stationary_distribution(generator_from_dense(q));
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Dense, SemigroupOfAConservativeGeneratorIsStochastic) {
  Eigen::MatrixXd q(3, 3);
  q << -2, 1, 1, 0.5, -1, 0.5, 3, 0, -3;
  const Eigen::MatrixXd p = semigroup(q, 0.7);
  EXPECT_LE((p.rowwise().sum() - Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_GE(p.minCoeff(), 0.0);
  EXPECT_LE((semigroup(q, 0.0) - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Dense, DecayRatesOfThreeNodeChain) {
  Eigen::MatrixXd q(3, 3);
  q << -16, 8, 0, 8, -16, 8, 0, 8, -16;
  const auto rates = decay_rates(q);
  ASSERT_EQ(rates.size(), 3u);
  EXPECT_NEAR(rates[0], 16 - 8 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(rates[1], 16, 1e-12);
  EXPECT_NEAR(rates[2], 16 + 8 * std::sqrt(2.0), 1e-12);
}

TEST(Dense, LargeGridsAreRefused) {
  const ValidatedProblem p = validate_problem(rect_2d(1.0, true));
  const Grid grid = build_grid(p, 1.0 / 64);
  try {
    to_dense(assemble_generator(grid, p, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLargeForDense);
  }
}
