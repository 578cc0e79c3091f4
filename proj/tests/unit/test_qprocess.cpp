#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "exitrate/control.hpp"
#include "exitrate/dense.hpp"
#include "exitrate/qprocess.hpp"

using namespace exitrate;

namespace {

constexpr double kPi = std::numbers::pi;

GeneratorMatrix three_node() {
  Eigen::MatrixXd q(3, 3);
  q << -16, 8, 0, 8, -16, 8, 0, 8, -16;
  return generator_from_dense(q);
}

struct Solved {
  ValidatedProblem problem;
  Grid grid;
  PolicyIterationTrace trace;
  QProcessModel model;
};

Solved setup(const ProblemSpec& spec, double h, Mode mode = Mode::kMax) {
  ValidatedProblem p = validate_problem(spec);
  Grid grid = build_grid(p, h);
  PolicyIterationTrace t = policy_iteration(p, grid, mode);
  QProcessModel m = build_qprocess(t.generator, t.eigen);
  return {std::move(p), std::move(grid), std::move(t), std::move(m)};
}

}  // namespace

TEST(DoobTransform, ScalarBecomesFrozen) {
  const GeneratorMatrix g = generator_from_dense(Eigen::MatrixXd::Constant(1, 1, -3.0));
  const QProcessModel m = build_qprocess(g, principal_eigenpair(g));
  EXPECT_NEAR(m.g_tilde.entries.coeff(0, 0), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.mu_tilde[0], 1.0);
}

TEST(DoobTransform, ThreeNodeRates) {
  const GeneratorMatrix g = three_node();
  const QProcessModel m = build_qprocess(g, principal_eigenpair(g));
  EXPECT_NEAR(m.g_tilde.entries.coeff(0, 1), 8 * std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(m.g_tilde.entries.coeff(1, 0), 4 * std::sqrt(2.0), 1e-10);
  EXPECT_LE(m.row_sum_residual, 1e-12);
}

TEST(DoobTransform, ConfinedAndExactOnTheCatalog) {
  for (const auto& entry : builtin_catalog()) {
    const Solved s = setup(entry.spec, 1.0 / 32);
    EXPECT_LE(s.model.g_tilde.row_sums().cwiseAbs().maxCoeff(), 1e-9) << entry.name;
    EXPECT_LE(s.model.g_tilde.killing.cwiseAbs().maxCoeff(), 1e-9) << entry.name;
    EXPECT_LE(s.model.product_relation_error, 1e-12) << entry.name;
    EXPECT_NEAR(s.model.mu_tilde.sum(), 1.0, 1e-12);
    EXPECT_NEAR(s.model.alpha.sum(), 1.0, 1e-12);
    EXPECT_GT(s.model.mu_tilde.minCoeff(), 0.0);
  }
}

TEST(DoobTransform, LimitDensitiesOfTheInterval) {
  const Solved s = setup(bm_interval(), 1.0 / 64);
  const double h = s.grid.h();
  double worst_mu = 0.0, worst_alpha = 0.0;
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const double x = s.grid.node(i)[0];
    const auto k = static_cast<Eigen::Index>(i);
    worst_mu = std::max(worst_mu, std::abs(s.model.mu_tilde[k] / h - 2 * std::pow(std::sin(kPi * x), 2)));
    worst_alpha = std::max(worst_alpha, std::abs(s.model.alpha[k] / h - kPi / 2 * std::sin(kPi * x)));
  }
  EXPECT_LE(worst_mu, 0.02 * 2.0);
  EXPECT_LE(worst_alpha, 0.02 * kPi / 2);
}

TEST(QProcessDrift, MatchesTheCotangentField) {
  const Solved s = setup(bm_interval(), 1.0 / 128);
  const auto drift = qprocess_drift(s.problem, s.grid, s.trace.policy, s.model.psi);
  EXPECT_NEAR(drift[s.grid.nearest({0.25, 0})][0], kPi, 2e-3);
  EXPECT_NEAR(drift[s.grid.nearest({0.5, 0})][0], 0.0, 1e-9);
}

TEST(Rayleigh, ErrorShrinksAlongRefinement) {
  for (const auto& spec : {bm_interval(), drift_interval(1.0)}) {
    double previous = std::numeric_limits<double>::infinity();
    for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
      const Solved s = setup(spec, h);
      const RayleighResult r = rayleigh_identity(s.grid, s.problem, s.model);
      EXPECT_LE(r.relative_error, 1.2 * previous) << spec.name << " " << h;
      if (h == 1.0 / 64) EXPECT_LE(r.relative_error, 0.05);
      previous = r.relative_error;
    }
  }
}

TEST(Girsanov, TimeZeroIsTheIdentity) {
  const GeneratorMatrix g = three_node();
  const EigenPair e = principal_eigenpair(g);
  const Field f(Field::LinSpaced(3, -1.0, 2.0));
  const GirsanovResult r = girsanov_check(g, e, 0.0, f);
  EXPECT_LE((r.lhs - f).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((r.rhs - f).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Girsanov, EigenvectorDecaysExactly) {
  const GeneratorMatrix g = three_node();
  const EigenPair e = principal_eigenpair(g);
  const GirsanovResult r = girsanov_check(g, e, 0.5, e.psi);
  EXPECT_LE((r.lhs - std::exp(-0.5 * e.lambda) * e.psi).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(r.sup_difference, 1e-12);
  EXPECT_LE(girsanov_check(g, e, 1.0, Field::Ones(3)).sup_difference, 1e-10);
}

TEST(Girsanov, RandomTestFunctionsOnSmallGrids) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (const auto& spec : {bm_interval(), bang_bang()}) {
    const Solved s = setup(spec, 1.0 / 32);
    for (int k = 0; k < 3; ++k) {
      Field f(static_cast<Eigen::Index>(s.grid.size()));
      for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = unif(rng);
      for (double t : {0.1, 1.0, 5.0})
        EXPECT_LE(girsanov_check(s.trace.generator, s.trace.eigen, t, f).sup_difference, 1e-8);
    }
  }
}

TEST(Survival, ThreeNodeLimit) {
  const GeneratorMatrix g = three_node();
  const EigenPair e = principal_eigenpair(g);
  const QProcessModel m = build_qprocess(g, e);
  const SurvivalTable t = survival_asymptotics(g, m, {0.5, 1.0, 10.0}, 1);
  EXPECT_NEAR(t.limit, (1 + std::sqrt(2.0)) / 2, 1e-10);
  EXPECT_NEAR(t.limit_from_mu, t.limit, 1e-10);
  EXPECT_NEAR(t.rows.back().scaled_survival, t.limit, 1e-10);
  EXPECT_LT(t.rows.back().tv_to_alpha, t.rows.front().tv_to_alpha);
}

TEST(Survival, SweepDecaysAtTheSpectralGap) {
  const Solved s = setup(bm_interval(), 1.0 / 32);
  const SurvivalTable t = survival_sweep(s.trace.generator, s.model, s.grid.nearest({0.25, 0}),
                                         0.1 / s.trace.lambda(), 1e-9, 100000);
  const TvDecayFit fit = fit_tv_decay(t, s.trace.generator, 1e-8, 1e-2);
  EXPECT_GE(fit.r_squared, 0.99);
  EXPECT_LE(fit.relative_error, 0.1);
  // Continuum gap of the interval: (4 - 1) pi^2 / 2.
  EXPECT_NEAR(fit.spectral_gap, 1.5 * kPi * kPi, 0.05 * 1.5 * kPi * kPi);
}

TEST(Lyapunov, CertificateHoldsPointwise) {
  const Solved s = setup(bm_interval(), 1.0 / 32);
  LyapunovOptions opts;
  opts.b_radius = 0.2;
  opts.enlargement = 0.25;
  const LyapunovCertificate c = lyapunov_certificate(s.problem, s.grid, s.trace.policy, s.model, opts);
  EXPECT_GT(c.rho, 0.0);
  EXPECT_GT(c.V.minCoeff(), 0.0);
  const Field gv = s.model.g_tilde.apply(c.V);
  for (Eigen::Index i = 0; i < gv.size(); ++i) {
    const double bound = (c.K[static_cast<std::size_t>(i)] ? c.C : 0.0) - c.rho * c.V[i];
    EXPECT_LE(gv[i], bound + 1e-9 * c.C + 1e-12) << i;
  }
}

// V = Phi / Psi grows like 1/h at boundary-adjacent nodes, so the factor 10
// over the median is reached once h is fine enough.
TEST(Lyapunov, FunctionBlowsUpAtTheBoundary) {
  std::vector<double> ratios;
  for (double h : {1.0 / 64, 1.0 / 128}) {
    const Solved s = setup(bm_interval(), h);
    LyapunovOptions opts;
    opts.b_radius = 0.2;
    const LyapunovCertificate c =
        lyapunov_certificate(s.problem, s.grid, s.trace.policy, s.model, opts);
    std::vector<double> v(c.V.data(), c.V.data() + c.V.size());
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    ratios.push_back(std::min(c.V[0], c.V[c.V.size() - 1]) / v[v.size() / 2]);
  }
  EXPECT_GE(ratios[1], 10.0);
  EXPECT_GT(ratios[1], 1.8 * ratios[0]);
}

TEST(Lyapunov, CertificatesExistOnTheCatalog) {
  for (const auto& entry : builtin_catalog()) {
    const Solved s = setup(entry.spec, entry.spec.dim() == 1 ? 1.0 / 32 : 1.0 / 16);
    const LyapunovCertificate c = lyapunov_certificate(s.problem, s.grid, s.trace.policy, s.model);
    EXPECT_GT(c.rho, 0.0) << entry.name;
    EXPECT_LE(c.max_violation, 1e-9 * c.C + 1e-12) << entry.name;
  }
}

TEST(YProcess, ConservativeAndEqualToTheTransformForOneAction) {
  const Solved s = setup(bm_interval(), 1.0 / 16);
  const GeneratorMatrix y = y_generator(s.trace.generator, s.trace.eigen.psi);
  EXPECT_LE(y.row_sums().cwiseAbs().maxCoeff(), 1e-9);
  const Eigen::MatrixXd diff = Eigen::MatrixXd(y.entries) - Eigen::MatrixXd(s.model.g_tilde.entries);
  EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(UniformErgodicity, SingleActionReducesToTheEnergyIdentity) {
  const Solved s = setup(bm_interval(), 1.0 / 64, Mode::kMin);
  UniformErgodicityOptions opts;
  opts.sample_policies = 2;
  const UniformErgodicityReport r = uniform_ergodicity(s.problem, s.grid, s.trace, opts);
  EXPECT_TRUE(r.certificate_ok);
  for (const auto& p : r.policies)
    EXPECT_NEAR(p.energy, r.lambda_min, 0.05 * r.lambda_min);
}

TEST(UniformErgodicity, RandomPoliciesSatisfyTheBound) {
  const Solved s = setup(bang_bang(), 1.0 / 32, Mode::kMin);
  UniformErgodicityOptions opts;
  opts.sample_policies = 10;
  opts.seed = 5;
  opts.slack_constant = s.trace.lambda();
  const UniformErgodicityReport r = uniform_ergodicity(s.problem, s.grid, s.trace, opts);
  EXPECT_TRUE(r.certificate_ok);
  EXPECT_TRUE(r.inequality_ok);
  EXPECT_EQ(r.policies.size(), 10u);
}

TEST(RandomPolicies, AreReproducible) {
  EXPECT_EQ(random_policies(20, 3, 4, 9)[3], random_policies(20, 3, 4, 9)[3]);
  EXPECT_NE(random_policies(20, 3, 4, 9)[0], random_policies(20, 3, 4, 10)[0]);
}

TEST(Representations, AgreeOnTheInterval) {
  const Representations r = exit_rate_representations(validate_problem(bm_interval()), 1.0 / 64);
  EXPECT_LE(r.max_pairwise_difference, 0.05);
  for (double v : r.values) EXPECT_NEAR(v, r.lambda, 0.05 * r.lambda);
}
