#include "exitrate/variational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <sstream>

#include "exitrate/eigenpair.hpp"
#include "exitrate/error.hpp"

namespace exitrate {

namespace {

constexpr std::size_t kMaxCandidates = (kMaxWPoints - 1) / 3;

bool same_field(const Field& a, const Field& b) {
  return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() <= 1e-12;
}

// Relative-entropy rate of tilted rates against the originals.
double entropy_cost(double q, double q_tilde) {
  if (q_tilde == 0.0) return q;
  return q_tilde * std::log(q_tilde / q) - q_tilde + q;
}

std::string padded(char prefix, std::size_t k) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%c%07zu", prefix, k);
  return buf;
}

}  // namespace

WGrid build_w_grid(const Grid& grid, const std::vector<Field>& candidate_psis) {
  WGrid out;
  for (const auto& psi : candidate_psis) {
    if (static_cast<std::size_t>(psi.size()) != grid.size())
      throw Error(ErrorCode::kInvalidArgument, "candidate field does not match the grid");
    if (out.candidates.size() == kMaxCandidates) break;
    if (std::none_of(out.candidates.begin(), out.candidates.end(),
                     [&](const Field& c) { return same_field(c, psi); }))
      out.candidates.push_back(psi);
  }
  std::vector<std::vector<Vec2>> grads;
  for (const auto& c : out.candidates) grads.push_back(discrete_gradient(grid, c, Extension::kLogZero));
  out.per_node.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.per_node[i].push_back(WPoint{});
    for (std::size_t c = 0; c < out.candidates.size(); ++c)
      for (double s : kWScales)
        out.per_node[i].push_back({c, s, {s * grads[c][i][0], s * grads[c][i][1]}});
  }
  return out;
}

OccupationLP build_occupation_lp(const Grid& grid, const ValidatedProblem& problem,
                                 const WGrid& w_grid,
                                 const std::optional<PolicySpec>& allowed_actions,
                                 const AssemblyOptions& assembly) {
  if (allowed_actions) check_policy(*allowed_actions, grid.size(), problem.num_actions());
  OccupationLP out;
  out.w_grid = w_grid;
  out.nodes = grid.size();
  out.actions = problem.num_actions();
  const auto gens = action_generators(grid, problem, assembly);

  struct Entry {
    std::size_t row;
    double value;
  };
  std::vector<std::vector<Entry>> cols;
  for (std::size_t x = 0; x < grid.size(); ++x) {
    const Vec2 a = problem.diffusion(grid.node(x));
    for (std::size_t u = 0; u < problem.num_actions(); ++u) {
      if (allowed_actions && (*allowed_actions)[x] != u) continue;
      const auto row = off_diagonal_row(gens[u], x);
      const double kill = gens[u].killing[static_cast<Eigen::Index>(x)];
      for (std::size_t k = 0; k < w_grid.per_node[x].size(); ++k) {
        const WPoint& wp = w_grid.per_node[x][k];
        OccupationColumn col{x, u, k, 0.0, 0.0};
        std::vector<Entry> entries;
        double out_rate = 0.0;
        for (const auto& e : row) {
          double q = e.rate;
          if (wp.scale != 0.0) {
            const Field& psi = w_grid.candidates[wp.candidate];
            q *= std::exp(wp.scale * (psi[static_cast<Eigen::Index>(e.col)] -
                                      psi[static_cast<Eigen::Index>(x)]));
          }
          col.cost += entropy_cost(e.rate, q);
          out_rate += q;
          entries.push_back({e.col, q});
        }
        if (wp.scale == 0.0) {
          out_rate += kill;
        } else {
          col.cost += kill;
        }
        entries.push_back({x, -out_rate});
        for (int d = 0; d < grid.dim(); ++d) col.quadratic_cost += 0.5 * a[d] * wp.w[d] * wp.w[d];
        out.columns.push_back(col);
        cols.push_back(std::move(entries));
      }
    }
  }

  const std::size_t m = grid.size() + 1;
  const std::size_t n = out.columns.size();
  if (n > kMaxLpColumns)
    throw Error(ErrorCode::kTooLarge, "occupation LP has " + std::to_string(n) + " columns");
  out.lp.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  out.lp.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  out.lp.b[static_cast<Eigen::Index>(m - 1)] = 1.0;
  out.lp.c.resize(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& e : cols[j])
      out.lp.A(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(j)) += e.value;
    out.lp.A(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(j)) = 1.0;
    out.lp.c[static_cast<Eigen::Index>(j)] = out.columns[j].cost;
    out.lp.column_names.push_back(padded('X', j));
  }
  for (std::size_t i = 0; i + 1 < m; ++i) out.lp.row_names.push_back(padded('S', i));
  out.lp.row_names.push_back("NORM");
  return out;
}

OccupationSolution solve_occupation_lp(const OccupationLP& lp) {
  OccupationSolution sol;
  sol.lp = solve_lp(lp.lp);
  sol.pi = sol.lp.x;
  sol.value = sol.lp.value;
  sol.quadratic_value = quadratic_objective(lp, sol.pi);
  return sol;
}

std::size_t find_candidate(const WGrid& w_grid, const Field& psi) {
  for (std::size_t c = 0; c < w_grid.candidates.size(); ++c)
    if (same_field(w_grid.candidates[c], psi)) return c;
  throw Error(ErrorCode::kInvalidArgument, "field is not among the w-grid candidates");
}

Eigen::VectorXd induced_measure(const OccupationLP& lp, const PolicySpec& policy,
                                std::size_t candidate, const Field& mu) {
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lp.columns.size()));
  std::vector<bool> placed(lp.nodes, false);
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    const auto& col = lp.columns[j];
    const WPoint& wp = lp.w_grid.per_node[col.node][col.wpoint];
    if (col.action == policy[col.node] && wp.candidate == candidate && wp.scale == 1.0 &&
        !placed[col.node]) {
      pi[static_cast<Eigen::Index>(j)] = mu[static_cast<Eigen::Index>(col.node)];
      placed[col.node] = true;
    }
  }
  if (std::find(placed.begin(), placed.end(), false) != placed.end())
    throw Error(ErrorCode::kInvalidArgument, "policy/candidate pair has no column at some node");
  return pi;
}

double objective(const OccupationLP& lp, const Eigen::VectorXd& pi) { return lp.lp.c.dot(pi); }

double quadratic_objective(const OccupationLP& lp, const Eigen::VectorXd& pi) {
  double s = 0.0;
  for (std::size_t j = 0; j < lp.columns.size(); ++j)
    s += lp.columns[j].quadratic_cost * pi[static_cast<Eigen::Index>(j)];
  return s;
}

double feasibility_residual(const OccupationLP& lp, const Eigen::VectorXd& pi) {
  return (lp.lp.A * pi - lp.lp.b).cwiseAbs().maxCoeff();
}

double generator_integral(const OccupationLP& lp, const Eigen::VectorXd& pi, const Field& f) {
  const Eigen::Index rows = static_cast<Eigen::Index>(lp.nodes);
  // Columns hold the transposed tilted rows, so f^T (A pi) sums pi (A_col f).
  return f.dot(lp.lp.A.topRows(rows) * pi);
}

MinimizerStructure verify_minimizer_structure(const OccupationLP& lp, const Eigen::VectorXd& pi,
                                              const PolicySpec& optimal_policy,
                                              const Field& psi_star, const Field& mu_tilde) {
  MinimizerStructure s;
  const double total = pi.sum();
  Field marginal = Field::Zero(static_cast<Eigen::Index>(lp.nodes));
  for (std::size_t j = 0; j < lp.columns.size(); ++j)
    marginal[static_cast<Eigen::Index>(lp.columns[j].node)] += pi[static_cast<Eigen::Index>(j)];
  s.marginal_tv = 0.5 * (marginal / total - mu_tilde).lpNorm<1>();

  // The Q-process gradient at each node, expressed through the w-grid
  // candidate equal to psi*: its scale-1 point.
  const std::size_t star = find_candidate(lp.w_grid, psi_star);
  std::vector<Vec2> target(lp.nodes);
  for (std::size_t x = 0; x < lp.nodes; ++x)
    for (const auto& wp : lp.w_grid.per_node[x])
      if (wp.candidate == star && wp.scale == 1.0) target[x] = wp.w;
  auto dist = [](const Vec2& a, const Vec2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); };

  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    const auto& col = lp.columns[j];
    const double mass = pi[static_cast<Eigen::Index>(j)];
    if (mass == 0.0) continue;
    if (col.action == optimal_policy[col.node]) s.action_mass += mass;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& wp : lp.w_grid.per_node[col.node])
      nearest = std::min(nearest, dist(wp.w, target[col.node]));
    const WPoint& own = lp.w_grid.per_node[col.node][col.wpoint];
    if (dist(own.w, target[col.node]) <= nearest + 1e-12) s.gradient_mass += mass;
  }
  s.action_mass /= total;
  s.gradient_mass /= total;
  s.marginal_ok = s.marginal_tv <= 0.05;
  s.action_ok = s.action_mass >= 0.95;
  s.gradient_ok = s.gradient_mass >= 0.95;
  return s;
}

FixedPolicyResult fixed_policy_lp(const ValidatedProblem& problem, double h,
                                  const PolicySpec& policy,
                                  const std::vector<Field>& extra_candidates,
                                  const ControlOptions& options) {
  const Grid grid = build_grid(problem, h);
  const GeneratorMatrix g = assemble_generator(grid, problem, policy, options.assembly);
  const EigenPair eig = principal_eigenpair(g, options.eigen);
  const QProcessModel q = build_qprocess(g, eig);
  std::vector<Field> candidates{q.psi};
  candidates.insert(candidates.end(), extra_candidates.begin(), extra_candidates.end());
  const OccupationLP lp =
      build_occupation_lp(grid, problem, build_w_grid(grid, candidates), policy, options.assembly);
  FixedPolicyResult r;
  r.lambda = eig.lambda;
  r.value = solve_occupation_lp(lp).value;
  r.induced_objective = objective(lp, induced_measure(lp, policy, 0, q.mu_tilde));
  return r;
}

std::string solution_csv(const Grid& grid, const ValidatedProblem& problem,
                         const OccupationLP& lp, const Eigen::VectorXd& pi) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << (grid.dim() == 1 ? "x,u,w,mass\n" : "x1,x2,u,w1,w2,mass\n");
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    const double mass = pi[static_cast<Eigen::Index>(j)];
    if (mass <= 0.0) continue;
    const auto& col = lp.columns[j];
    const Point x = grid.node(col.node);
    const WPoint& wp = lp.w_grid.per_node[col.node][col.wpoint];
    os << x[0] << ',';
    if (grid.dim() == 2) os << x[1] << ',';
    os << problem.spec().actions[col.action] << ',' << wp.w[0] << ',';
    if (grid.dim() == 2) os << wp.w[1] << ',';
    os << mass << '\n';
  }
  return os.str();
}

}  // namespace exitrate
