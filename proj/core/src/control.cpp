#include "exitrate/control.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "exitrate/error.hpp"
#include "exitrate/parallel.hpp"

namespace exitrate {

std::string_view to_string(Mode mode) { return mode == Mode::kMax ? "MAX" : "MIN"; }

Mode parse_mode(std::string_view text) {
  if (text == "max" || text == "MAX") return Mode::kMax;
  if (text == "min" || text == "MIN") return Mode::kMin;
  throw Error(ErrorCode::kInvalidArgument, "mode must be MAX or MIN, got '" + std::string(text) + "'");
}

std::string PolicyIterationTrace::csv() const {
  std::ostringstream os;
  os << std::setprecision(17) << "iteration,lambda,lambda_lo,lambda_hi,changes\n";
  for (std::size_t k = 0; k < steps.size(); ++k)
    os << k << ',' << steps[k].lambda << ',' << steps[k].cw[0] << ',' << steps[k].cw[1] << ','
       << steps[k].changes << '\n';
  return os.str();
}

PolicySpec policy_improve(const Grid& grid, const ValidatedProblem& problem, const Field& psi,
                          Mode mode, double tie_tolerance) {
  if ((psi.array() <= 0.0).any())
    throw Error(ErrorCode::kInvalidArgument, "policy improvement needs a positive field");
  const Field log_psi = psi.array().log().matrix();
  const auto grad = discrete_gradient(grid, log_psi, Extension::kLogZero);
  const double sign = mode == Mode::kMax ? 1.0 : -1.0;
  PolicySpec out = PolicySpec::uniform(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.node(i);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < problem.num_actions(); ++u) {
      const Vec2 m = problem.drift(x, u);
      double score = 0.0;
      for (int k = 0; k < grid.dim(); ++k) score += m[k] * grad[i][k];
      score *= sign;
      if (u == 0 || score > best + tie_tolerance * std::max(1.0, std::abs(best))) {
        best = score;
        out.assignment[i] = u;
      }
    }
  }
  return out;
}

PolicyIterationTrace policy_iteration(const ValidatedProblem& problem, double h, Mode mode,
                                      const ControlOptions& options) {
  return policy_iteration(problem, build_grid(problem, h), mode, options);
}

PolicyIterationTrace policy_iteration(const ValidatedProblem& problem, const Grid& grid,
                                      Mode mode, const ControlOptions& options,
                                      const std::optional<Field>& potential) {
  PolicyIterationTrace trace;
  trace.mode = mode;
  PolicySpec policy = PolicySpec::uniform(grid.size(), 0);
  std::vector<PolicySpec> seen;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    GeneratorMatrix g = assemble_generator(grid, problem, policy, options.assembly);
    if (potential) g = with_potential(g, *potential);
    EigenPair eig = principal_eigenpair(g, options.eigen);

    PolicyStep step;
    step.policy = policy;
    step.lambda = eig.lambda;
    step.cw = eig.cw;
    if (!trace.steps.empty())
      for (std::size_t i = 0; i < policy.size(); ++i)
        step.changes += policy[i] != trace.steps.back().policy[i];
    trace.steps.push_back(step);

    PolicySpec next = policy_improve(grid, problem, eig.psi, mode, options.tie_tolerance);
    if (next == policy) {
      trace.converged = true;
      trace.policy = std::move(policy);
      trace.eigen = std::move(eig);
      trace.generator = std::move(g);
      return trace;
    }
    seen.push_back(policy);
    if (std::find(seen.begin(), seen.end(), next) != seen.end())
      throw Error(ErrorCode::kNoConvergence, "policy iteration entered a cycle");
    policy = std::move(next);
  }
  throw Error(ErrorCode::kNoConvergence, "policy iteration exceeded its iteration cap");
}

EnumerationResult enumerate_policies(const ValidatedProblem& problem, double h,
                                     const ControlOptions& options) {
  const Grid grid = build_grid(problem, h);
  const std::size_t n = grid.size();
  const std::size_t k = problem.num_actions();
  const double log_count = static_cast<double>(n) * std::log2(static_cast<double>(k));
  if (log_count > 20.0 + 1e-12)
    throw Error(ErrorCode::kTooLarge, std::to_string(k) + "^" + std::to_string(n) +
                                          " policies exceeds 2^20");
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= k;

  auto decode = [&](std::size_t code) {
    PolicySpec p = PolicySpec::uniform(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      p.assignment[i] = code % k;
      code /= k;
    }
    return p;
  };
  std::vector<double> lambdas(count);
  parallel_for(count, [&](std::size_t code) {
    const GeneratorMatrix g = assemble_generator(grid, problem, decode(code), options.assembly);
    lambdas[code] = principal_eigenpair(g, options.eigen).lambda;
  });

  EnumerationResult best;
  best.evaluated = count;
  best.lambda = lambdas[0];
  best.policy = decode(0);
  for (std::size_t code = 1; code < count; ++code) {
    const double slack = 1e-12 * std::max(1.0, std::abs(best.lambda));
    if (lambdas[code] < best.lambda - slack) {
      best.lambda = lambdas[code];
      best.policy = decode(code);
    } else if (std::abs(lambdas[code] - best.lambda) <= slack) {
      PolicySpec p = decode(code);
      if (p.assignment < best.policy.assignment) best.policy = std::move(p);
    }
  }
  return best;
}

std::vector<GeneratorMatrix> action_generators(const Grid& grid, const ValidatedProblem& problem,
                                               const AssemblyOptions& options) {
  std::vector<GeneratorMatrix> out;
  out.reserve(problem.num_actions());
  for (std::size_t u = 0; u < problem.num_actions(); ++u)
    out.push_back(assemble_generator(grid, problem, u, options));
  return out;
}

HjbResidual hjb_residual(const Grid& grid, const ValidatedProblem& problem,
                         const PolicyIterationTrace& trace, double eps,
                         const AssemblyOptions& options) {
  const Field psi = trace.eigen.psi.array().log().matrix();
  const auto grad = discrete_gradient(grid, psi, Extension::kLogZero);
  const auto gens = action_generators(grid, problem, options);
  const auto mask = grid.layer_mask(std::max(eps, grid.h()));
  const double sign = trace.mode == Mode::kMax ? 1.0 : -1.0;

  HjbResidual r;
  r.h = grid.h();
  r.eps = eps;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!mask[i]) continue;
    ++r.nodes;
    double opt = -std::numeric_limits<double>::infinity();
    for (const auto& g : gens) {
      double l = 0.0;
      for (const auto& e : off_diagonal_row(g, i))
        l += e.rate * (psi[static_cast<Eigen::Index>(e.col)] - psi[static_cast<Eigen::Index>(i)]);
      opt = std::max(opt, sign * l);
    }
    const Vec2 a = problem.diffusion(grid.node(i));
    double quad = 0.0;
    for (int k = 0; k < grid.dim(); ++k) quad += a[k] * grad[i][k] * grad[i][k];
    r.sup = std::max(r.sup, std::abs(sign * opt + 0.5 * quad + trace.lambda()));
  }
  return r;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

HjbConvergence hjb_convergence(const ValidatedProblem& problem, const std::vector<double>& hs,
                               Mode mode, const ControlOptions& options) {
  HjbConvergence out;
  const double eps = problem.domain().min_side() / 8.0;
  std::vector<double> lx, ly;
  for (double h : hs) {
    const Grid grid = build_grid(problem, h);
    const auto trace = policy_iteration(problem, grid, mode, options);
    HjbResidual r = hjb_residual(grid, problem, trace, eps, options.assembly);
    out.constant = std::max(out.constant, r.sup / h);
    lx.push_back(std::log(h));
    ly.push_back(std::log(std::max(r.sup, 1e-300)));
    out.levels.push_back(r);
  }
  if (hs.size() >= 2) out.order = fit_slope(lx, ly);
  return out;
}

}  // namespace exitrate
