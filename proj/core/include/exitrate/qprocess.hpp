#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exitrate/control.hpp"
#include "exitrate/eigenpair.hpp"
#include "exitrate/generator.hpp"
#include "exitrate/grid.hpp"
#include "exitrate/problem.hpp"

namespace exitrate {

/// Ground-state transform of a killed generator together with its two
/// stationary objects.
struct QProcessModel {
  /// diag(Psi)^-1 (G + lambda I) diag(Psi); conservative.
  GeneratorMatrix g_tilde;
  double lambda = 0.0;
  /// Principal right eigenvector (max 1) and its logarithm.
  Field Psi;
  Field psi;
  /// Invariant law of g_tilde (computed from g_tilde alone).
  Field mu_tilde;
  /// Quasi-stationary distribution: the normalized left eigenvector.
  Field alpha;
  /// max_i |row sum of g_tilde|.
  double row_sum_residual = 0.0;
  /// ||mu_tilde - Psi*alpha/<Psi,alpha>||_1.
  double product_relation_error = 0.0;
  /// ||mu_tilde^T g_tilde||_inf and ||alpha^T G + lambda alpha^T||_inf.
  double mu_residual = 0.0;
  double alpha_residual = 0.0;
};

/// Throws IllConditioned when max Psi / min Psi > 1e12.
QProcessModel doob_transform(const GeneratorMatrix& g, const EigenPair& eigen);

/// Fills mu_tilde (stationary vector of g_tilde), alpha (= phi) and the
/// residuals. Throws NullVectorNotUnique if g_tilde is reducible.
void stationary_measures(QProcessModel& model, const GeneratorMatrix& g, const EigenPair& eigen);

/// doob_transform followed by stationary_measures.
QProcessModel build_qprocess(const GeneratorMatrix& g, const EigenPair& eigen);

/// Continuous Q-process drift m_v + a grad psi at the nodes, one-sided near
/// the boundary.
std::vector<Vec2> qprocess_drift(const ValidatedProblem& problem, const Grid& grid,
                                 const PolicySpec& policy, const Field& psi);

/// 1/2 sum_x |sigma^T grad psi(x)|^2 weights(x).
double energy_functional(const Grid& grid, const ValidatedProblem& problem, const Field& psi,
                         const Field& weights);

struct RayleighResult {
  double estimate = 0.0;
  double lambda = 0.0;
  double relative_error = 0.0;
};

RayleighResult rayleigh_identity(const Grid& grid, const ValidatedProblem& problem,
                                 const QProcessModel& model);

struct GirsanovResult {
  Field lhs;
  Field rhs;
  double sup_difference = 0.0;
};

/// lhs = e^{tG} g, rhs = e^{-lambda t} Psi (e^{t G~} (g / Psi)), both dense.
GirsanovResult girsanov_check(const GeneratorMatrix& g, const EigenPair& eigen, double t,
                              const Field& test_function);

struct SurvivalRow {
  double t = 0.0;
  /// e^{lambda t} P_x0(tau > t).
  double scaled_survival = 0.0;
  /// TV distance between the law at t conditioned on survival and alpha.
  double tv_to_alpha = 0.0;
};

struct SurvivalTable {
  std::size_t x0 = 0;
  std::vector<SurvivalRow> rows;
  /// Psi(x0) sum(phi) / <phi, Psi>.
  double limit = 0.0;
  /// e^{psi(x0)} sum_y e^{-psi(y)} mu_tilde(y); equal to `limit`.
  double limit_from_mu = 0.0;
};

SurvivalTable survival_asymptotics(const GeneratorMatrix& g, const QProcessModel& model,
                                   const std::vector<double>& times, std::size_t x0);

/// Evenly spaced survival table with step dt, stepping the dense semigroup
/// until the TV distance falls below tv_floor or max_steps is reached.
SurvivalTable survival_sweep(const GeneratorMatrix& g, const QProcessModel& model, std::size_t x0,
                             double dt, double tv_floor, std::size_t max_steps);

struct TvDecayFit {
  double rate = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
  /// Second-smallest minus smallest decay rate of the dense generator.
  double spectral_gap = 0.0;
  double relative_error = 0.0;
};

/// Fits log TV against t over the rows with TV in [tv_lo, tv_hi].
TvDecayFit fit_tv_decay(const SurvivalTable& table, const GeneratorMatrix& g, double tv_lo,
                        double tv_hi);

struct LyapunovOptions {
  /// Radius of the ball B at the domain centre; <= 0 means min_side / 4.
  double b_radius = 0.0;
  /// Margin added on every side, as a fraction of min_side (rounded to h).
  double enlargement = 0.25;
};

/// A V > 0 with A V <= C 1_K - rho V at every node for every listed A.
struct LyapunovCertificate {
  Field V;
  /// V * Psi, the enlarged-domain eigenfunction restricted to the grid.
  Field Phi;
  double C = 0.0;
  double rho = 0.0;
  double eps = 0.0;
  std::vector<bool> K;
  double enlarged_lambda = 0.0;
  /// min over the grid of V * Psi, and min of the enlarged eigenfunction
  /// over lattice points of the closed domain.
  double min_v_psi = 0.0;
  double min_phi_closure = 0.0;
  /// max_i (A V)(i) - C 1_K(i) + rho V(i) over all listed A; <= 0 when valid.
  double max_violation = 0.0;
};

/// Scans K = D_eps for eps = k h, taking the largest eps whose complement
/// gives rho > 0; throws NoCertificate if none does.
LyapunovCertificate fit_certificate(const Grid& grid, const std::vector<GeneratorMatrix>& ops,
                                    const Field& V);

/// max_i (A V)(i) - C 1_K(i) + rho V(i) over the given operators.
double certificate_violation(const std::vector<GeneratorMatrix>& ops,
                             const LyapunovCertificate& cert);

/// Foster-Lyapunov certificate for the Q-process of policy v with
/// V = Phi / Psi, Phi the principal eigenfunction of L_v - 1_B on the
/// enlarged box.
LyapunovCertificate lyapunov_certificate(const ValidatedProblem& problem, const Grid& grid,
                                         const PolicySpec& policy, const QProcessModel& model,
                                         const LyapunovOptions& options = {},
                                         const ControlOptions& control = {});

/// Generator of the controlled process Y under policy v: off-diagonal rates
/// G_v(i,j) Psi_*(j) / Psi_*(i), diagonal minus their sum.
GeneratorMatrix y_generator(const GeneratorMatrix& g_v, const Field& Psi_min);

struct PolicyInequality {
  PolicySpec policy;
  /// 1/2 sum |sigma^T grad psi_*|^2 under the invariant law of Y_v.
  double energy = 0.0;
  double slack = 0.0;
  /// lambda_* - energy + slack >= 0.
  double margin = 0.0;
  bool holds = false;
};

struct UniformErgodicityOptions {
  LyapunovOptions lyapunov;
  std::size_t sample_policies = 10;
  std::uint64_t seed = 1;
  /// Inequality slack is slack_constant * h.
  double slack_constant = 0.0;
};

struct UniformErgodicityReport {
  double lambda_min = 0.0;
  double h = 0.0;
  LyapunovCertificate certificate;
  bool certificate_ok = false;
  std::vector<PolicyInequality> policies;
  bool inequality_ok = false;
};

/// Uniform certificate over every action for the Y process built from the
/// MIN-mode eigenfunction, plus the energy inequality for sampled policies.
UniformErgodicityReport uniform_ergodicity(const ValidatedProblem& problem, const Grid& grid,
                                           const PolicyIterationTrace& min_trace,
                                           const UniformErgodicityOptions& options,
                                           const ControlOptions& control = {});

/// Policies drawn uniformly at random from a seeded generator.
std::vector<PolicySpec> random_policies(std::size_t nodes, std::size_t actions,
                                        std::size_t count, std::uint64_t seed);

/// The optimal exit rate evaluated four ways from independent objects:
///   (i)   1/2 sum |sigma^T grad psi*|^2 mu_tilde_{v*}
///   (ii)  min over solved policies of the same functional under v
///   (iii) sum (|sigma^T grad Psi*|^2 / Psi*) alpha_{v*} / (2 sum Psi* alpha_{v*})
///   (iv)  min over solved policies of (iii)
/// The solved policies are those visited by MAX-mode policy iteration.
struct Representations {
  double lambda = 0.0;
  double values[4] = {0.0, 0.0, 0.0, 0.0};
  /// max over pairs of |a - b| / min(a, b).
  double max_pairwise_difference = 0.0;
  std::size_t policies = 0;
};

Representations exit_rate_representations(const ValidatedProblem& problem, double h,
                                          const ControlOptions& options = {});

/// CSV: coordinates, mu_tilde, alpha, Psi, phi and (when given) V.
std::string measures_csv(const Grid& grid, const QProcessModel& model, const EigenPair& eigen,
                         const Field* V = nullptr);

}  // namespace exitrate
