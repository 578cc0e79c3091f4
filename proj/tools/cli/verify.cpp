#include "cli/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include "exitrate/control.hpp"
#include "exitrate/dense.hpp"
#include "exitrate/eigenpair.hpp"
#include "exitrate/error.hpp"
#include "exitrate/generator.hpp"
#include "exitrate/mc.hpp"
#include "exitrate/qprocess.hpp"
#include "exitrate/variational.hpp"

#include "cli/pipeline.hpp"

namespace exitrate::cli {

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances, one block per criterion.
constexpr double kClosedFormTol = 1e-3;
constexpr double kMinOrder = 1.9;
constexpr double kRuntimeClosedForm = 5.0;
constexpr double kDriftShiftTol = 5e-3;
constexpr double k2dTol = 5e-3;
constexpr double kRuntime2d = 60.0;
constexpr double kConjugationTol = 1e-8;
constexpr double kProductTol = 1e-12;
constexpr double kSurvivalLimitTol = 1e-6;
constexpr double kThreeNodeTol = 1e-10;
constexpr double kRayleighTol = 0.05;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kEnumerationTol = 1e-10;
constexpr double kHjbMinOrder = 0.9;
constexpr double kLpValueTol = 0.05;
constexpr double kInducedTol = 1e-8;
constexpr double kRuntimeLp = 120.0;
constexpr double kCertificateRelTol = 1e-9;
constexpr double kExitRateRelTol = 0.05;
constexpr double kRuntimeMc = 120.0;
constexpr double kOccupancyTvTol = 0.05;
constexpr double kTvFitMinR2 = 0.99;
constexpr double kTvFitRateTol = 0.10;
constexpr double kRepresentationTol = 0.05;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ValidatedProblem catalog_problem(const std::string& reference) {
  return validate_problem(resolve_problem(reference));
}

std::vector<ValidatedProblem> catalog() {
  std::vector<ValidatedProblem> out;
  for (const auto& entry : builtin_catalog()) out.push_back(validate_problem(entry.spec));
  return out;
}

double closed_form_error(const ValidatedProblem& p, double h, double exact,
                         const EigenOptions& opts) {
  const Grid grid = build_grid(p, h);
  return std::abs(principal_eigenpair(assemble_generator(grid, p, 0), opts).lambda - exact);
}

// Uniform draws in [-1, 1) from the top 53 bits, identical on every platform.
Field random_field(std::mt19937_64& rng, std::size_t n) {
  Field f(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < f.size(); ++i)
    f[i] = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
  return f;
}

CriterionResult c01(const RunConfig& config) {
  CriterionResult r{1, "closed-form eigenvalue", false, {}, 0.0};
  const ValidatedProblem p = catalog_problem("bm-interval");
  const double exact = kPi * kPi / 2.0;
  const EigenOptions opts = control_options(config).eigen;
  std::vector<double> hs{1.0 / 64, 1.0 / 128, 1.0 / 256}, lx, ly;
  Json errs = Json::array();
  double finest = 0.0, finest_seconds = 0.0;
  for (double h : hs) {
    const auto t0 = Clock::now();
    finest = closed_form_error(p, h, exact, opts);
    finest_seconds = seconds_since(t0);
    errs.push_back({{"h", h}, {"error", finest}});
    lx.push_back(std::log(h));
    ly.push_back(std::log(finest));
  }
  const double order = fit_slope(lx, ly);
  const bool fast = finest_seconds < kRuntimeClosedForm;
  r.details = {{"errors", errs}, {"order", order}, {"finest_within_runtime", fast}};
  r.pass = finest <= kClosedFormTol && order >= kMinOrder && fast;
  return r;
}

CriterionResult c02(const RunConfig& config) {
  CriterionResult r{2, "drift shift", false, {}, 0.0};
  const EigenOptions opts = control_options(config).eigen;
  Json errs = Json::array();
  bool ok = true;
  for (double c : {0.5, 1.0, 2.0}) {
    const ValidatedProblem p = validate_problem(drift_interval(c));
    const double err = closed_form_error(p, 1.0 / 256, kPi * kPi / 2.0 + c * c / 2.0, opts);
    errs.push_back({{"c", c}, {"error", err}});
    ok = ok && err <= kDriftShiftTol;
  }
  r.details = {{"h", 1.0 / 256}, {"errors", errs}};
  r.pass = ok;
  return r;
}

CriterionResult c03(const RunConfig& config) {
  CriterionResult r{3, "two-dimensional separable eigenvalue", false, {}, 0.0};
  const ValidatedProblem p = catalog_problem("rect-2d-free");
  const auto t0 = Clock::now();
  const double err = closed_form_error(p, 1.0 / 128, kPi * kPi, control_options(config).eigen);
  const bool fast = seconds_since(t0) < kRuntime2d;
  r.details = {{"h", 1.0 / 128}, {"error", err}, {"within_runtime", fast}};
  r.pass = err <= k2dTol && fast;
  return r;
}

CriterionResult c04(const RunConfig& config) {
  CriterionResult r{4, "exact ground-state conjugation", false, {}, 0.0};
  const ControlOptions control = control_options(config);
  std::mt19937_64 rng(config.seed);
  double worst = 0.0;
  Json cases = Json::array();
  for (auto [name, h] : {std::pair{"bm-interval", 1.0 / 64}, std::pair{"bang-bang", 1.0 / 32}}) {
    const OptimalSetup s = optimal_setup(catalog_problem(name), h, Mode::kMax, control);
    double sup = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Field g = random_field(rng, s.grid.size());
      for (double t : {0.1, 1.0, 5.0})
        sup = std::max(sup, girsanov_check(s.trace.generator, s.trace.eigen, t, g).sup_difference);
    }
    cases.push_back({{"problem", name}, {"nodes", s.grid.size()}, {"sup_difference", sup}});
    worst = std::max(worst, sup);
  }
  r.details = {{"cases", cases}, {"worst", worst}};
  r.pass = worst <= kConjugationTol;
  return r;
}

CriterionResult c05(const RunConfig& config) {
  CriterionResult r{5, "stationary law product relation", false, {}, 0.0};
  const ControlOptions control = control_options(config);
  Json cases = Json::array();
  bool ok = true;
  for (const auto& p : catalog()) {
    const OptimalSetup s = optimal_setup(p, 1.0 / 32, Mode::kMax, control);
    cases.push_back({{"problem", p.name()}, {"error", s.model.product_relation_error}});
    ok = ok && s.model.product_relation_error <= kProductTol;
  }
  r.details = {{"cases", cases}};
  r.pass = ok;
  return r;
}

CriterionResult c06(const RunConfig& config) {
  CriterionResult r{6, "survival asymptotics", false, {}, 0.0};
  const ControlOptions control = control_options(config);
  Json cases = Json::array();
  bool ok = true;
  for (auto [name, h, x] : {std::tuple{"bm-interval", 1.0 / 64, 0.25},
                            std::tuple{"bang-bang", 1.0 / 32, -0.5}}) {
    const OptimalSetup s = optimal_setup(catalog_problem(name), h, Mode::kMax, control);
    const std::size_t x0 = s.grid.nearest({x, 0.0});
    const SurvivalTable t = survival_asymptotics(s.trace.generator, s.model, {10.0}, x0);
    const double diff = std::abs(t.rows[0].scaled_survival - t.limit);
    cases.push_back({{"problem", name}, {"x0", s.grid.node(x0)[0]},
                     {"scaled_survival_t10", t.rows[0].scaled_survival},
                     {"limit", t.limit}, {"difference", diff}});
    ok = ok && diff <= kSurvivalLimitTol;
  }

  // Three-node chain of the Brownian interval at h = 1/4.
  Eigen::MatrixXd q(3, 3);
  q << -16, 8, 0, 8, -16, 8, 0, 8, -16;
  const GeneratorMatrix g = generator_from_dense(q);
  const EigenPair e = principal_eigenpair(g, control.eigen);
  const SurvivalTable t = survival_asymptotics(g, build_qprocess(g, e), {10.0}, 1);
  const double exact = (1.0 + std::sqrt(2.0)) / 2.0;
  const double diff3 = std::abs(t.limit - exact);
  const double diff3_t10 = std::abs(t.rows[0].scaled_survival - exact);
  ok = ok && diff3 <= kThreeNodeTol && diff3_t10 <= kThreeNodeTol;
  r.details = {{"cases", cases},
               {"three_node", {{"limit", t.limit}, {"difference", diff3},
                               {"difference_t10", diff3_t10}}}};
  r.pass = ok;
  return r;
}

CriterionResult c07(const RunConfig& config) {
  CriterionResult r{7, "energy identity", false, {}, 0.0};
  const ControlOptions control = control_options(config);
  Json cases = Json::array();
  bool ok = true;
  for (const char* name : {"bm-interval", "drift-interval"}) {
    const ValidatedProblem p = catalog_problem(name);
    double rel[2];
    for (int k = 0; k < 2; ++k) {
      const OptimalSetup s = optimal_setup(p, k == 0 ? 1.0 / 64 : 1.0 / 128, Mode::kMax, control);
      rel[k] = rayleigh_identity(s.grid, p, s.model).relative_error;
    }
    cases.push_back({{"problem", name}, {"relative_error_h64", rel[0]},
                     {"relative_error_h128", rel[1]}});
    ok = ok && rel[0] <= kRayleighTol && rel[1] < rel[0];
  }
  r.details = {{"cases", cases}};
  r.pass = ok;
  return r;
}

CriterionResult c08(const RunConfig& config) {
  CriterionResult r{8, "policy iteration", false, {}, 0.0};
  const ControlOptions control = control_options(config);
  const ValidatedProblem p3 = catalog_problem("bang-bang");
  const ValidatedProblem p4 = catalog_problem("rect-2d");

  bool monotone = true;
  Json traces = Json::array();
  for (auto [p, h] : {std::pair{&p3, 0.25}, std::pair{&p3, 1.0 / 16}, std::pair{&p3, 1.0 / 64},
                      std::pair{&p4, 1.0 / 16}}) {
    const PolicyIterationTrace t = policy_iteration(*p, h, Mode::kMax, control);
    double worst_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < t.steps.size(); ++k)
      worst_increase = std::max(worst_increase, t.steps[k].lambda - t.steps[k - 1].lambda);
    const bool ok = t.converged && worst_increase <= kMonotoneSlack;
    monotone = monotone && ok;
    traces.push_back({{"problem", p->name()}, {"h", h}, {"steps", t.steps.size()},
                      {"monotone", ok}});
  }

  const double pi_lambda = policy_iteration(p3, 0.25, Mode::kMax, control).lambda();
  const EnumerationResult en = enumerate_policies(p3, 0.25, control);
  const double gap = std::abs(pi_lambda - en.lambda);

  bool ordered = true;
  Json modes = Json::array();
  for (double h : {0.25, 1.0 / 64}) {
    const double lmax = policy_iteration(p3, h, Mode::kMax, control).lambda();
    const double lmin = policy_iteration(p3, h, Mode::kMin, control).lambda();
    modes.push_back({{"h", h}, {"lambda_max_mode", lmax}, {"lambda_min_mode", lmin}});
    ordered = ordered && lmin > lmax;
  }
  r.details = {{"traces", traces},
               {"enumeration", {{"policies", en.evaluated}, {"lambda", en.lambda},
                                {"policy_iteration", pi_lambda}, {"difference", gap}}},
               {"modes", modes}};
  r.pass = monotone && gap <= kEnumerationTol && ordered;
  return r;
}

CriterionResult c09(const RunConfig& config) {
  CriterionResult r{9, "HJB residual", false, {}, 0.0};
  const HjbConvergence conv =
      hjb_convergence(catalog_problem("bang-bang"), {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128},
                      Mode::kMax, control_options(config));
  Json levels = Json::array();
  bool bounded = true;
  for (const auto& l : conv.levels) {
    levels.push_back({{"h", l.h}, {"sup", l.sup}, {"nodes", l.nodes}});
    bounded = bounded && l.sup <= conv.constant * l.h * (1.0 + 1e-12);
  }
  r.details = {{"levels", levels}, {"order", conv.order}, {"C", conv.constant}};
  r.pass = bounded && conv.order >= kHjbMinOrder;
  return r;
}

CriterionResult c10(const RunConfig& config) {
  CriterionResult r{10, "occupation-measure LP", false, {}, 0.0};
  const auto t0 = Clock::now();
  const VariationalRun run =
      run_variational(catalog_problem("bang-bang"), 0.125, control_options(config));
  const bool fast = seconds_since(t0) < kRuntimeLp;
  const double lambda = run.optimal.trace.lambda();
  const double rel = std::abs(run.solution.value - lambda) / lambda;
  const double induced = std::abs(run.induced_objective - lambda);
  r.details = {{"lambda", lambda},
               {"lp_value", run.solution.value},
               {"relative_gap", rel},
               {"columns", run.lp.lp.A.cols()},
               {"induced_objective_difference", induced},
               {"induced_feasibility", run.induced_feasibility},
               {"marginal_tv", run.structure.marginal_tv},
               {"action_mass", run.structure.action_mass},
               {"gradient_mass", run.structure.gradient_mass},
               {"within_runtime", fast}};
  if (run.perturbed_objective)
    r.details["perturbed"] = {{"objective", *run.perturbed_objective},
                              {"structure_ok", run.perturbed_structure->ok()}};
  r.pass = rel <= kLpValueTol && induced <= kInducedTol && run.structure.ok() && fast;
  return r;
}

CriterionResult c11(const RunConfig& config) {
  CriterionResult r{11, "Lyapunov certificates", false, {}, 0.0};
  const ControlOptions control = control_options(config);
  const double h = 1.0 / 32;
  Json fixed = Json::array();
  bool fixed_ok = true;
  for (const auto& p : catalog()) {
    const OptimalSetup s = optimal_setup(p, h, Mode::kMax, control);
    bool ok = false;
    Json j{{"problem", p.name()}};
    try {
      const LyapunovCertificate c =
          lyapunov_certificate(p, s.grid, s.trace.policy, s.model, {}, control);
      ok = c.rho > 0.0 && c.max_violation <= kCertificateRelTol * c.C + 1e-12;
      j["rho"] = c.rho;
      j["C"] = c.C;
      j["max_violation"] = c.max_violation;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoCertificate) throw;
      j["error"] = e.what();
    }
    j["ok"] = ok;
    fixed.push_back(j);
    fixed_ok = fixed_ok && ok;
  }

  const ValidatedProblem p3 = catalog_problem("bang-bang");
  const Grid grid = build_grid(p3, h);
  const PolicyIterationTrace min_trace = policy_iteration(p3, grid, Mode::kMin, control);
  UniformErgodicityOptions uopts;
  uopts.sample_policies = 10;
  uopts.seed = config.seed;
  uopts.slack_constant = min_trace.lambda();
  const UniformErgodicityReport u = uniform_ergodicity(p3, grid, min_trace, uopts, control);
  double worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& pi : u.policies) worst_margin = std::min(worst_margin, pi.margin);

  r.details = {{"fixed_policy", fixed},
               {"uniform", {{"lambda_min_mode", u.lambda_min},
                            {"rho", u.certificate.rho},
                            {"C", u.certificate.C},
                            {"max_violation", u.certificate.max_violation},
                            {"ok", u.certificate_ok}}},
               {"random_policies", {{"count", u.policies.size()},
                                    {"slack", uopts.slack_constant * h},
                                    {"worst_margin", worst_margin},
                                    {"ok", u.inequality_ok}}}};
  r.pass = fixed_ok && u.certificate_ok && u.inequality_ok;
  return r;
}

CriterionResult c12(const RunConfig& config) {
  CriterionResult r{12, "Monte Carlo", false, {}, 0.0};
  const ControlOptions control = control_options(config);
  const ValidatedProblem p = catalog_problem("bm-interval");
  const double exact = kPi * kPi / 2.0;

  const Grid grid = build_grid(p, 1.0 / 64);
  const FeedbackPolicy policy = FeedbackPolicy::constant(grid, 0);
  SimulationOptions opts;
  opts.x0 = {0.5, 0.0};
  opts.dt = 1e-4;
  opts.T = 1.5;
  opts.n_paths = 100000;
  opts.seed = config.seed;
  const auto t0 = Clock::now();
  const KilledRun killed = run_killed(p, policy, opts, 0.5, 1.5);
  const bool fast = seconds_since(t0) < kRuntimeMc;
  const double err = std::abs(killed.estimate.rate - exact);
  const bool rate_ok =
      err <= std::max(3.0 * killed.estimate.standard_error, kExitRateRelTol * exact) && fast;

  const OptimalSetup s = optimal_setup(p, 1.0 / 64, Mode::kMax, control);
  SimulationOptions qopts = opts;
  qopts.n_paths = 64;
  qopts.T = 50.0;
  const QProcessOccupancy occ = simulate_qprocess(p, policy, s.model.psi, qopts);
  const Field hist = Eigen::Map<const Field>(occ.histogram.data(), occ.histogram.size());
  const double tv = 0.5 * (hist - s.model.mu_tilde).lpNorm<1>();
  const bool q_ok = tv <= kOccupancyTvTol && occ.killed == 0;

  const OptimalSetup fine = optimal_setup(p, 1.0 / 256, Mode::kMax, control);
  GirsanovMcOptions gopts;
  gopts.x0 = {0.5, 0.0};
  gopts.seed = config.seed;
  const GirsanovEstimate gir =
      mc_girsanov_check(p, FeedbackPolicy::constant(fine.grid, 0), fine.trace.lambda(),
                        fine.model.psi, central_indicator(p.domain()), gopts);

  r.details = {{"exit_rate", {{"estimate", killed.estimate.rate},
                              {"standard_error", killed.estimate.standard_error},
                              {"error", err},
                              {"survivors_t0", killed.estimate.survivors_t0},
                              {"within_runtime", fast}}},
               {"qprocess", {{"tv_to_mu", tv},
                             {"killed", occ.killed},
                             {"projections", occ.projections},
                             {"projection_flag", occ.projection_flag()}}},
               {"girsanov", {{"lhs", gir.lhs},
                             {"lhs_stderr", gir.lhs_stderr},
                             {"rhs", gir.rhs},
                             {"rhs_stderr", gir.rhs_stderr},
                             {"overlap", gir.overlap}}}};
  r.pass = rate_ok && q_ok && gir.overlap;
  return r;
}

CriterionResult c13(const RunConfig& config) {
  CriterionResult r{13, "conditioned-law convergence", false, {}, 0.0};
  const ControlOptions control = control_options(config);
  Json cases = Json::array();
  bool ok = true;
  for (auto [name, x] : {std::pair{"bm-interval", 0.25}, std::pair{"bang-bang", -0.5}}) {
    const OptimalSetup s = optimal_setup(catalog_problem(name), 1.0 / 64, Mode::kMax, control);
    const std::size_t x0 = s.grid.nearest({x, 0.0});
    const SurvivalTable table =
        survival_sweep(s.trace.generator, s.model, x0, 0.1 / s.trace.lambda(), 1e-9, 100000);
    const TvDecayFit fit = fit_tv_decay(table, s.trace.generator, 1e-8, 1e-2);
    cases.push_back({{"problem", name}, {"nodes", s.grid.size()}, {"rate", fit.rate},
                     {"spectral_gap", fit.spectral_gap}, {"r_squared", fit.r_squared},
                     {"points", fit.points}, {"relative_error", fit.relative_error}});
    ok = ok && fit.r_squared >= kTvFitMinR2 && fit.relative_error <= kTvFitRateTol;
  }
  r.details = {{"cases", cases}};
  r.pass = ok;
  return r;
}

CriterionResult c14(const RunConfig& config) {
  CriterionResult r{14, "four representations", false, {}, 0.0};
  Json cases = Json::array();
  bool ok = true;
  for (const char* name : {"bm-interval", "bang-bang"}) {
    const Representations rep =
        exit_rate_representations(catalog_problem(name), 1.0 / 64, control_options(config));
    cases.push_back({{"problem", name}, {"lambda", rep.lambda},
                     {"values", {rep.values[0], rep.values[1], rep.values[2], rep.values[3]}},
                     {"max_pairwise_difference", rep.max_pairwise_difference}});
    ok = ok && rep.max_pairwise_difference <= kRepresentationTol;
  }
  r.details = {{"cases", cases}};
  r.pass = ok;
  return r;
}

bool same_bits(const void* a, const void* b, std::size_t bytes) {
  return std::memcmp(a, b, bytes) == 0;
}

CriterionResult c15(const RunConfig& config) {
  CriterionResult r{15, "thread-count invariance", false, {}, 0.0};
  const ValidatedProblem p = catalog_problem("bang-bang");
  const OptimalSetup s = optimal_setup(p, 1.0 / 32, Mode::kMax, control_options(config));
  const FeedbackPolicy policy(s.grid, s.trace.policy);
  SimulationOptions opts;
  opts.x0 = {0.0, 0.0};
  opts.dt = 1e-3;
  opts.T = 0.5;
  opts.n_paths = 2000;
  opts.seed = config.seed;

  bool killed_same = true, q_same = true;
  std::vector<TrajectoryEnsemble> ens;
  std::vector<QProcessOccupancy> occ;
  for (std::size_t workers : {1, 8}) {
    opts.workers = workers;
    ens.push_back(simulate_killed(p, policy, opts));
    SimulationOptions q = opts;
    q.n_paths = 16;
    occ.push_back(simulate_qprocess(p, policy, s.model.psi, q, central_indicator(p.domain())));
  }
  killed_same = same_bits(ens[0].exit_times.data(), ens[1].exit_times.data(),
                          ens[0].exit_times.size() * sizeof(double)) &&
                ens[0].exited == ens[1].exited &&
                same_bits(ens[0].terminal.data(), ens[1].terminal.data(),
                          ens[0].terminal.size() * sizeof(Point));
  q_same = same_bits(occ[0].histogram.data(), occ[1].histogram.data(),
                     occ[0].histogram.size() * sizeof(double)) &&
           same_bits(occ[0].weighted_terminal.data(), occ[1].weighted_terminal.data(),
                     occ[0].weighted_terminal.size() * sizeof(double)) &&
           occ[0].projections == occ[1].projections;
  r.details = {{"workers", {1, 8}}, {"killed_identical", killed_same},
               {"qprocess_identical", q_same}};
  r.pass = killed_same && q_same;
  return r;
}

using CriterionFn = CriterionResult (*)(const RunConfig&);
constexpr CriterionFn kCriteria[kCriterionCount] = {c01, c02, c03, c04, c05, c06, c07, c08,
                                                    c09, c10, c11, c12, c13, c14, c15};

const char* kNames[kCriterionCount] = {
    "closed-form eigenvalue", "drift shift", "two-dimensional separable eigenvalue",
    "exact ground-state conjugation", "stationary law product relation", "survival asymptotics",
    "energy identity", "policy iteration", "HJB residual", "occupation-measure LP",
    "Lyapunov certificates", "Monte Carlo", "conditioned-law convergence",
    "four representations", "thread-count invariance"};

}  // namespace

CriterionResult run_criterion(int id, const RunConfig& config) {
  if (id < 1 || id > kCriterionCount)
    throw Error(ErrorCode::kInvalidArgument, "criterion id out of range");
  const auto t0 = Clock::now();
  CriterionResult r;
  try {
    r = kCriteria[id - 1](config);
  } catch (const std::exception& e) {
    r = CriterionResult{id, kNames[id - 1], false, {{"error", e.what()}}, 0.0};
  }
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<CriterionResult> run_acceptance_suite(const RunConfig& config,
                                                  const CriterionCallback& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    out.push_back(run_criterion(id, config));
    if (on_result) on_result(out.back());
  }
  return out;
}

Json criterion_to_json(const CriterionResult& result) {
  Json j;
  j["id"] = result.id;
  j["name"] = result.name;
  j["pass"] = result.pass;
  j["details"] = result.details;
  return j;
}

std::string criterion_line(const CriterionResult& result) {
  std::ostringstream os;
  os << (result.pass ? "PASS" : "FAIL") << ' ' << (result.id < 10 ? " " : "") << result.id << ' '
     << result.name;
  return os.str();
}

}  // namespace exitrate::cli
