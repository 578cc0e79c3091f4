#include "cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "exitrate/control.hpp"
#include "exitrate/dense.hpp"
#include "exitrate/eigenpair.hpp"
#include "exitrate/error.hpp"
#include "exitrate/generator.hpp"
#include "exitrate/mc.hpp"
#include "exitrate/qprocess.hpp"
#include "exitrate/simplex.hpp"
#include "exitrate/variational.hpp"

#include "cli/pipeline.hpp"
#include "cli/verify.hpp"

namespace exitrate::cli {

namespace {

Json header(const char* command, const RunConfig& config, const ValidatedProblem* problem) {
  Json j;
  j["command"] = command;
  j["config"] = config_to_json(config);
  j["seed"] = config.seed;
  if (problem) {
    j["problem"] = problem->name();
    j["dim"] = problem->dim();
  }
  return j;
}

Json grid_json(const Grid& grid) {
  Json j;
  j["h"] = grid.h();
  j["nodes"] = grid.size();
  return j;
}

Json eigen_json(const EigenPair& e) {
  Json j;
  j["lambda"] = e.lambda;
  j["residual"] = e.residual;
  j["left_residual"] = e.left_residual;
  j["cw_lower"] = e.cw[0];
  j["cw_upper"] = e.cw[1];
  j["iterations"] = e.iterations;
  return j;
}

Json action_counts(const ValidatedProblem& problem, const PolicySpec& policy) {
  std::vector<std::size_t> counts(problem.num_actions(), 0);
  for (std::size_t u : policy.assignment) ++counts[u];
  Json j = Json::object();
  for (std::size_t u = 0; u < counts.size(); ++u) j[problem.spec().actions[u]] = counts[u];
  return j;
}

std::string policy_csv(const Grid& grid, const ValidatedProblem& problem,
                       const PolicySpec& policy) {
  std::ostringstream os;
  os.precision(17);
  os << (grid.dim() == 1 ? "x,action\n" : "x,y,action\n");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point p = grid.node(i);
    os << p[0] << ',';
    if (grid.dim() == 2) os << p[1] << ',';
    os << problem.spec().actions[policy[i]] << '\n';
  }
  return os.str();
}

Json model_json(const QProcessModel& m) {
  Json j;
  j["row_sum_residual"] = m.row_sum_residual;
  j["product_relation_error"] = m.product_relation_error;
  j["mu_residual"] = m.mu_residual;
  j["alpha_residual"] = m.alpha_residual;
  return j;
}

Json certificate_json(const LyapunovCertificate& c) {
  Json j;
  j["C"] = c.C;
  j["rho"] = c.rho;
  j["eps"] = c.eps;
  j["enlarged_lambda"] = c.enlarged_lambda;
  j["min_v_psi"] = c.min_v_psi;
  j["min_phi_closure"] = c.min_phi_closure;
  j["max_violation"] = c.max_violation;
  return j;
}

}  // namespace

CommandResult cmd_solve(const RunConfig& config) {
  const ValidatedProblem problem = validate_config(config);
  const Grid grid = build_grid(problem, resolved_spacing(config, problem));
  const GeneratorMatrix g = assemble_generator(grid, problem, config.action);
  const EigenPair e = principal_eigenpair(g, control_options(config).eigen);

  CommandResult r;
  r.report = header("solve", config, &problem);
  r.report["grid"] = grid_json(grid);
  r.report["action"] = problem.spec().actions[config.action];
  r.report["eigen"] = eigen_json(e);
  r.report["max_row_sum_plus_killing"] = (g.row_sums() + g.killing).cwiseAbs().maxCoeff();
  r.files["eigenpair.csv"] = eigenpair_csv(grid, e);
  r.files["generator.txt"] = to_triplets(g);
  return r;
}

CommandResult cmd_optimize(const RunConfig& config) {
  const ValidatedProblem problem = validate_config(config);
  const Grid grid = build_grid(problem, resolved_spacing(config, problem));
  const PolicyIterationTrace trace =
      policy_iteration(problem, grid, config.mode, control_options(config));

  CommandResult r;
  r.report = header("optimize", config, &problem);
  r.report["grid"] = grid_json(grid);
  r.report["mode"] = std::string(to_string(config.mode));
  r.report["converged"] = trace.converged;
  r.report["iterations"] = trace.steps.size();
  Json steps = Json::array();
  for (const auto& s : trace.steps)
    steps.push_back({{"lambda", s.lambda}, {"cw_lower", s.cw[0]}, {"cw_upper", s.cw[1]},
                     {"changes", s.changes}});
  r.report["trace"] = steps;
  r.report["eigen"] = eigen_json(trace.eigen);
  r.report["action_counts"] = action_counts(problem, trace.policy);
  r.files["trace.csv"] = trace.csv();
  r.files["policy.csv"] = policy_csv(grid, problem, trace.policy);
  r.files["eigenpair.csv"] = eigenpair_csv(grid, trace.eigen);
  return r;
}

CommandResult cmd_qprocess(const RunConfig& config) {
  const ValidatedProblem problem = validate_config(config);
  const ControlOptions control = control_options(config);
  const OptimalSetup s =
      optimal_setup(problem, resolved_spacing(config, problem), config.mode, control);

  CommandResult r;
  r.report = header("qprocess", config, &problem);
  r.report["grid"] = grid_json(s.grid);
  r.report["lambda"] = s.trace.lambda();
  r.report["model"] = model_json(s.model);

  const RayleighResult ray = rayleigh_identity(s.grid, problem, s.model);
  r.report["rayleigh"] = {{"estimate", ray.estimate},
                          {"lambda", ray.lambda},
                          {"relative_error", ray.relative_error}};

  if (s.grid.size() <= kMaxDenseNodes) {
    const std::size_t x0 = s.grid.nearest(problem.domain().center());
    const SurvivalTable table =
        survival_asymptotics(s.trace.generator, s.model, {0.5, 1.0, 2.0, 5.0, 10.0}, x0);
    Json rows = Json::array();
    for (const auto& row : table.rows)
      rows.push_back({{"t", row.t},
                      {"scaled_survival", row.scaled_survival},
                      {"tv_to_alpha", row.tv_to_alpha}});
    r.report["survival"] = {{"x0", x0},
                            {"rows", rows},
                            {"limit", table.limit},
                            {"limit_from_mu", table.limit_from_mu}};
  } else {
    r.report["survival"] = "skipped: grid exceeds the dense limit";
  }

  const LyapunovCertificate cert =
      lyapunov_certificate(problem, s.grid, s.trace.policy, s.model, {}, control);
  r.report["lyapunov"] = certificate_json(cert);
  r.files["measures.csv"] = measures_csv(s.grid, s.model, s.trace.eigen, &cert.V);
  return r;
}

CommandResult cmd_variational(const RunConfig& config) {
  const ValidatedProblem problem = validate_config(config);
  // The dense simplex is meant for the small instances; default to h = 1/8.
  const double h = config.h > 0.0 ? config.h : 0.125;
  const VariationalRun run = run_variational(problem, h, control_options(config));
  const double lambda = run.optimal.trace.lambda();

  CommandResult r;
  r.report = header("variational", config, &problem);
  r.report["grid"] = grid_json(run.optimal.grid);
  r.report["lambda"] = lambda;
  r.report["lp"] = {{"rows", run.lp.lp.A.rows()},
                    {"columns", run.lp.lp.A.cols()},
                    {"candidates", run.lp.w_grid.candidates.size()},
                    {"value", run.solution.value},
                    {"quadratic_value", run.solution.quadratic_value},
                    {"relative_gap", std::abs(run.solution.value - lambda) / lambda},
                    {"pivots", run.solution.lp.pivots},
                    {"feasibility_residual", run.solution.lp.feasibility_residual},
                    {"complementary_slackness", run.solution.lp.complementary_slackness},
                    {"dual_infeasibility", run.solution.lp.dual_infeasibility}};
  r.report["induced"] = {{"objective", run.induced_objective},
                         {"feasibility_residual", run.induced_feasibility}};
  r.report["zero_sum"] = run.zero_sum;
  r.report["structure"] = {{"marginal_tv", run.structure.marginal_tv},
                           {"action_mass", run.structure.action_mass},
                           {"gradient_mass", run.structure.gradient_mass},
                           {"ok", run.structure.ok()}};
  if (run.perturbed_objective) {
    r.report["perturbed"] = {{"objective", *run.perturbed_objective},
                             {"action_mass", run.perturbed_structure->action_mass},
                             {"structure_ok", run.perturbed_structure->ok()}};
  }
  r.files["lp.mps"] = to_mps(run.lp.lp, "OCCUPATION");
  r.files["solution.csv"] = solution_csv(run.optimal.grid, problem, run.lp, run.solution.pi);
  return r;
}

CommandResult cmd_simulate(const RunConfig& config) {
  const ValidatedProblem problem = validate_config(config);
  const ControlOptions control = control_options(config);
  const OptimalSetup s =
      optimal_setup(problem, resolved_spacing(config, problem), config.mode, control);
  const FeedbackPolicy policy(s.grid, s.trace.policy);
  const Point x0 = problem.domain().center();

  SimulationOptions opts;
  opts.x0 = x0;
  opts.dt = config.dt;
  opts.T = config.T;
  opts.n_paths = config.paths;
  opts.seed = config.seed;
  const KilledRun killed = run_killed(problem, policy, opts, 0.25 * config.T, 0.75 * config.T);

  SimulationOptions qopts = opts;
  qopts.n_paths = std::min<std::size_t>(config.paths, 64);
  const QProcessOccupancy occ = simulate_qprocess(problem, policy, s.model.psi, qopts);
  Field hist = Eigen::Map<const Field>(occ.histogram.data(), occ.histogram.size());
  const double tv = 0.5 * (hist - s.model.mu_tilde).lpNorm<1>();
  const double energy = energy_functional(s.grid, problem, s.model.psi, s.model.mu_tilde);

  GirsanovMcOptions gopts;
  gopts.x0 = x0;
  gopts.t = 1.0;
  gopts.n_paths = config.paths;
  gopts.dt_killed = config.dt;
  gopts.dt_qprocess = config.dt;
  gopts.seed = config.seed;
  const GirsanovEstimate gir = mc_girsanov_check(problem, policy, s.trace.lambda(), s.model.psi,
                                                 central_indicator(problem.domain()), gopts);

  CommandResult r;
  r.report = header("simulate", config, &problem);
  r.report["grid"] = grid_json(s.grid);
  r.report["lambda"] = s.trace.lambda();
  r.report["exit_rate"] = {{"estimate", killed.estimate.rate},
                           {"standard_error", killed.estimate.standard_error},
                           {"window", {killed.window_lo, killed.window_hi}},
                           {"survivors_t0", killed.estimate.survivors_t0},
                           {"survival_at_T", killed.survival_at_T},
                           {"relative_error",
                            std::abs(killed.estimate.rate - s.trace.lambda()) / s.trace.lambda()}};
  r.report["qprocess"] = {{"paths", qopts.n_paths},
                          {"tv_to_mu", tv},
                          {"killed", occ.killed},
                          {"projections", occ.projections},
                          {"projection_flag", occ.projection_flag()},
                          {"energy_average", occ.energy_average},
                          {"energy_discrete", energy}};
  r.report["girsanov"] = {{"t", gopts.t},
                          {"lhs", gir.lhs},
                          {"lhs_stderr", gir.lhs_stderr},
                          {"rhs", gir.rhs},
                          {"rhs_stderr", gir.rhs_stderr},
                          {"overlap", gir.overlap}};
  return r;
}

CommandResult cmd_representations(const RunConfig& config) {
  const ValidatedProblem problem = validate_config(config);
  const Representations rep =
      exit_rate_representations(problem, resolved_spacing(config, problem),
                                control_options(config));
  CommandResult r;
  r.report = header("representations", config, &problem);
  r.report["lambda"] = rep.lambda;
  r.report["minimax_policies"] = rep.policies;
  r.report["values"] = {{"energy_optimal", rep.values[0]},
                        {"energy_min_over_policies", rep.values[1]},
                        {"ground_state_ratio_optimal", rep.values[2]},
                        {"ground_state_ratio_min_over_policies", rep.values[3]}};
  r.report["max_pairwise_difference"] = rep.max_pairwise_difference;
  const bool ok = rep.max_pairwise_difference <= 0.05;
  r.report["pass"] = ok;
  r.exit_code = ok ? kExitOk : kExitFail;
  return r;
}

CommandResult cmd_verify(const RunConfig& config) {
  validate_config(config);
  CommandResult r;
  r.report = header("verify", config, nullptr);
  Json criteria = Json::array();
  int failed = 0;
  for (const auto& c : run_acceptance_suite(config, [](const CriterionResult& c) {
         std::cerr << criterion_line(c) << "  (" << c.seconds << " s)\n";
       })) {
    criteria.push_back(criterion_to_json(c));
    if (!c.pass) ++failed;
  }
  r.report["criteria"] = criteria;
  r.report["passed"] = kCriterionCount - failed;
  r.report["failed"] = failed;
  r.exit_code = failed == 0 ? kExitOk : kExitFail;
  return r;
}

void write_outputs(const RunConfig& config, const CommandResult& result) {
  if (config.out.empty()) return;
  namespace fs = std::filesystem;
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(fs::path(config.out) / name, std::ios::binary);
    if (!(f << text)) throw Error(ErrorCode::kIo, "cannot write " + name);
  };
  write("report.json", result.report.dump(2) + "\n");
  for (const auto& [name, text] : result.files) write(name, text);
}

}  // namespace exitrate::cli
