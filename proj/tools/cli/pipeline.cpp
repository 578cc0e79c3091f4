#include "cli/pipeline.hpp"

#include <cmath>

#include "exitrate/generator.hpp"

namespace exitrate::cli {

OptimalSetup optimal_setup(const ValidatedProblem& problem, double h, Mode mode,
                           const ControlOptions& control) {
  OptimalSetup s;
  s.grid = build_grid(problem, h);
  s.trace = policy_iteration(problem, s.grid, mode, control);
  s.model = build_qprocess(s.trace.generator, s.trace.eigen);
  return s;
}

PolicySpec flipped_policy(const PolicySpec& policy, std::size_t actions) {
  PolicySpec out = policy;
  for (auto& u : out.assignment) u = actions - 1 - u;
  return out;
}

QProcessModel policy_qprocess(const Grid& grid, const ValidatedProblem& problem,
                              const PolicySpec& policy, const ControlOptions& control) {
  const GeneratorMatrix g = assemble_generator(grid, problem, policy, control.assembly);
  return build_qprocess(g, principal_eigenpair(g, control.eigen));
}

VariationalRun run_variational(const ValidatedProblem& problem, double h,
                               const ControlOptions& control) {
  VariationalRun run;
  run.optimal = optimal_setup(problem, h, Mode::kMax, control);
  const Grid& grid = run.optimal.grid;
  const PolicySpec& v_star = run.optimal.trace.policy;
  const QProcessModel& model = run.optimal.model;

  std::vector<Field> candidates{model.psi};
  for (const auto& step : run.optimal.trace.steps)
    candidates.push_back(policy_qprocess(grid, problem, step.policy, control).psi);
  const PolicySpec mirror = flipped_policy(v_star, problem.num_actions());
  std::optional<QProcessModel> mirror_model;
  if (mirror != v_star) {
    mirror_model = policy_qprocess(grid, problem, mirror, control);
    candidates.push_back(mirror_model->psi);
  }

  run.lp = build_occupation_lp(grid, problem, build_w_grid(grid, candidates), std::nullopt,
                               control.assembly);
  run.solution = solve_occupation_lp(run.lp);

  const std::size_t star = find_candidate(run.lp.w_grid, model.psi);
  const Eigen::VectorXd induced = induced_measure(run.lp, v_star, star, model.mu_tilde);
  run.induced_objective = objective(run.lp, induced);
  run.induced_feasibility = feasibility_residual(run.lp, induced);
  run.zero_sum = std::abs(generator_integral(run.lp, run.solution.pi, model.Psi));
  run.structure =
      verify_minimizer_structure(run.lp, run.solution.pi, v_star, model.psi, model.mu_tilde);

  if (mirror_model) {
    const std::size_t c = find_candidate(run.lp.w_grid, mirror_model->psi);
    const Eigen::VectorXd pert =
        0.9 * run.solution.pi + 0.1 * induced_measure(run.lp, mirror, c, mirror_model->mu_tilde);
    run.perturbed_objective = objective(run.lp, pert);
    run.perturbed_structure =
        verify_minimizer_structure(run.lp, pert, v_star, model.psi, model.mu_tilde);
  }
  return run;
}

std::function<double(const Point&)> central_indicator(const Box& box) {
  const Point c = box.center();
  const double r = box.min_side() / 10.0;
  const int dim = box.dim;
  return [c, r, dim](const Point& x) {
    double d2 = 0.0;
    for (int k = 0; k < dim; ++k) d2 += (x[k] - c[k]) * (x[k] - c[k]);
    return d2 < r * r ? 1.0 : 0.0;
  };
}

KilledRun run_killed(const ValidatedProblem& problem, const FeedbackPolicy& policy,
                     const SimulationOptions& options, double window_lo, double window_hi) {
  KilledRun run;
  const TrajectoryEnsemble ens = simulate_killed(problem, policy, options);
  run.window_lo = window_lo;
  run.window_hi = window_hi;
  run.estimate = estimate_exit_rate(ens, run.window_lo, run.window_hi);
  run.survival_at_T = ens.survival_fraction(options.T);
  return run;
}

}  // namespace exitrate::cli
