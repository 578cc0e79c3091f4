#include "exitrate/qprocess.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "exitrate/dense.hpp"
#include "exitrate/error.hpp"
#include "exitrate/parallel.hpp"

namespace exitrate {

QProcessModel doob_transform(const GeneratorMatrix& g, const EigenPair& eigen) {
  const Field& Psi = eigen.psi;
  const double ratio = Psi.maxCoeff() / Psi.minCoeff();
  if (!(ratio <= 1e12))
    throw Error(ErrorCode::kIllConditioned,
                "max Psi / min Psi = " + std::to_string(ratio) + " exceeds 1e12");
  QProcessModel model;
  model.lambda = eigen.lambda;
  model.Psi = Psi;
  model.psi = Psi.array().log().matrix();
  model.g_tilde.entries = g.entries;
  for (Eigen::Index r = 0; r < model.g_tilde.entries.outerSize(); ++r)
    for (SparseRowMatrix::InnerIterator it(model.g_tilde.entries, r); it; ++it)
      it.valueRef() = it.col() == r ? it.value() + eigen.lambda
                                    : it.value() * Psi[it.col()] / Psi[r];
  model.g_tilde.killing = Field::Zero(Psi.size());
  model.row_sum_residual = model.g_tilde.row_sums().cwiseAbs().maxCoeff();
  return model;
}

void stationary_measures(QProcessModel& model, const GeneratorMatrix& g, const EigenPair& eigen) {
  model.mu_tilde = stationary_distribution(model.g_tilde);
  model.alpha = eigen.phi / eigen.phi.sum();
  const Field product = model.Psi.cwiseProduct(model.alpha);
  model.product_relation_error = (model.mu_tilde - product / product.sum()).lpNorm<1>();
  const SparseRowMatrix gt_tilde = model.g_tilde.entries.transpose();
  model.mu_residual = (gt_tilde * model.mu_tilde).cwiseAbs().maxCoeff();
  const SparseRowMatrix gt = g.entries.transpose();
  model.alpha_residual = (gt * model.alpha + model.lambda * model.alpha).cwiseAbs().maxCoeff();
}

QProcessModel build_qprocess(const GeneratorMatrix& g, const EigenPair& eigen) {
  QProcessModel model = doob_transform(g, eigen);
  stationary_measures(model, g, eigen);
  return model;
}

std::vector<Vec2> qprocess_drift(const ValidatedProblem& problem, const Grid& grid,
                                 const PolicySpec& policy, const Field& psi) {
  check_policy(policy, grid.size(), problem.num_actions());
  const auto grad = discrete_gradient(grid, psi, Extension::kLogZero);
  std::vector<Vec2> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.node(i);
    const Vec2 m = problem.drift(x, policy[i]);
    const Vec2 a = problem.diffusion(x);
    for (int k = 0; k < grid.dim(); ++k) out[i][k] = m[k] + a[k] * grad[i][k];
  }
  return out;
}

double energy_functional(const Grid& grid, const ValidatedProblem& problem, const Field& psi,
                         const Field& weights) {
  const auto grad = discrete_gradient(grid, psi, Extension::kLogZero);
  std::vector<double> terms(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec2 a = problem.diffusion(grid.node(i));
    double q = 0.0;
    for (int k = 0; k < grid.dim(); ++k) q += a[k] * grad[i][k] * grad[i][k];
    terms[i] = 0.5 * q * weights[static_cast<Eigen::Index>(i)];
  }
  return pairwise_sum(terms);
}

RayleighResult rayleigh_identity(const Grid& grid, const ValidatedProblem& problem,
                                 const QProcessModel& model) {
  RayleighResult r;
  r.lambda = model.lambda;
  r.estimate = energy_functional(grid, problem, model.psi, model.mu_tilde);
  r.relative_error = std::abs(r.estimate - r.lambda) / std::abs(r.lambda);
  return r;
}

GirsanovResult girsanov_check(const GeneratorMatrix& g, const EigenPair& eigen, double t,
                              const Field& test_function) {
  if (t < 0.0) throw Error(ErrorCode::kInvalidArgument, "t must be nonnegative");
  const Eigen::MatrixXd dense = to_dense(g);
  const QProcessModel model = doob_transform(g, eigen);
  const Eigen::MatrixXd dense_tilde(model.g_tilde.entries);
  GirsanovResult r;
  r.lhs = semigroup(dense, t) * test_function;
  const Field scaled = test_function.cwiseQuotient(eigen.psi);
  r.rhs = std::exp(-eigen.lambda * t) * eigen.psi.cwiseProduct(semigroup(dense_tilde, t) * scaled);
  r.sup_difference = (r.lhs - r.rhs).cwiseAbs().maxCoeff();
  return r;
}

namespace {

double tv_distance(const Field& p, const Field& q) { return 0.5 * (p - q).lpNorm<1>(); }

void fill_limits(SurvivalTable& table, const QProcessModel& model) {
  const auto x0 = static_cast<Eigen::Index>(table.x0);
  const Field& phi = model.alpha;
  table.limit = model.Psi[x0] * phi.sum() / phi.dot(model.Psi);
  double s = 0.0;
  for (Eigen::Index i = 0; i < model.psi.size(); ++i)
    s += std::exp(-model.psi[i]) * model.mu_tilde[i];
  table.limit_from_mu = std::exp(model.psi[x0]) * s;
}

}  // namespace

SurvivalTable survival_asymptotics(const GeneratorMatrix& g, const QProcessModel& model,
                                   const std::vector<double>& times, std::size_t x0) {
  if (x0 >= g.size()) throw Error(ErrorCode::kInvalidArgument, "x0 is not a grid node");
  const Eigen::MatrixXd dense = to_dense(g);
  SurvivalTable table;
  table.x0 = x0;
  fill_limits(table, model);
  for (double t : times) {
    const Field row = semigroup(dense, t).row(static_cast<Eigen::Index>(x0)).transpose();
    const double survival = row.sum();
    table.rows.push_back(
        {t, std::exp(model.lambda * t) * survival, tv_distance(row / survival, model.alpha)});
  }
  return table;
}

SurvivalTable survival_sweep(const GeneratorMatrix& g, const QProcessModel& model, std::size_t x0,
                             double dt, double tv_floor, std::size_t max_steps) {
  if (x0 >= g.size()) throw Error(ErrorCode::kInvalidArgument, "x0 is not a grid node");
  const Eigen::MatrixXd step = semigroup(to_dense(g), dt);
  SurvivalTable table;
  table.x0 = x0;
  fill_limits(table, model);
  Eigen::RowVectorXd p = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(g.size()));
  p[static_cast<Eigen::Index>(x0)] = 1.0;
  double log_survival = 0.0;
  table.rows.push_back({0.0, 1.0, tv_distance(p.transpose(), model.alpha)});
  for (std::size_t k = 1; k <= max_steps; ++k) {
    p = p * step;
    const double s = p.sum();
    log_survival += std::log(s);
    p /= s;
    const double t = dt * static_cast<double>(k);
    const double tv = tv_distance(p.transpose(), model.alpha);
    table.rows.push_back({t, std::exp(model.lambda * t + log_survival), tv});
    if (tv < tv_floor) break;
  }
  return table;
}

TvDecayFit fit_tv_decay(const SurvivalTable& table, const GeneratorMatrix& g, double tv_lo,
                        double tv_hi) {
  std::vector<double> t, y;
  for (const auto& row : table.rows)
    if (row.tv_to_alpha >= tv_lo && row.tv_to_alpha <= tv_hi) {
      t.push_back(row.t);
      y.push_back(std::log(row.tv_to_alpha));
    }
  TvDecayFit fit;
  fit.points = t.size();
  const auto rates = decay_rates(to_dense(g));
  if (rates.size() >= 2) fit.spectral_gap = rates[1] - rates[0];
  if (t.size() < 3) return fit;
  const double slope = fit_slope(t, y);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  const double intercept = mean - slope * [&] {
    double m = 0.0;
    for (double v : t) m += v;
    return m / static_cast<double>(t.size());
  }();
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double pred = intercept + slope * t[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  fit.rate = -slope;
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  if (fit.spectral_gap > 0.0)
    fit.relative_error = std::abs(fit.rate - fit.spectral_gap) / fit.spectral_gap;
  return fit;
}

double certificate_violation(const std::vector<GeneratorMatrix>& ops,
                             const LyapunovCertificate& cert) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& op : ops) {
    const Field av = op.entries * cert.V;
    for (Eigen::Index i = 0; i < av.size(); ++i) {
      const double bound = (cert.K[static_cast<std::size_t>(i)] ? cert.C : 0.0) - cert.rho * cert.V[i];
      worst = std::max(worst, av[i] - bound);
    }
  }
  return worst;
}

LyapunovCertificate fit_certificate(const Grid& grid, const std::vector<GeneratorMatrix>& ops,
                                    const Field& V) {
  if ((V.array() <= 0.0).any())
    throw Error(ErrorCode::kNoCertificate, "Lyapunov function is not positive");
  const Eigen::Index n = V.size();
  std::vector<Field> av;
  for (const auto& op : ops) av.push_back(op.entries * V);
  Field rate = Field::Constant(n, std::numeric_limits<double>::infinity());
  for (const auto& a : av)
    for (Eigen::Index i = 0; i < n; ++i) rate[i] = std::min(rate[i], -a[i] / V[i]);

  int max_layers = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    max_layers = std::max(max_layers, static_cast<int>(std::lround(grid.boundary_distance(i) / grid.h())));

  for (int k = max_layers; k >= 1; --k) {
    const double eps = k * grid.h();
    const auto K = grid.layer_mask(eps);
    double rho = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i)
      if (!K[static_cast<std::size_t>(i)]) rho = std::min(rho, rate[i]);
    if (!(rho > 0.0) || !std::isfinite(rho)) continue;
    LyapunovCertificate cert;
    cert.V = V;
    cert.rho = rho;
    cert.eps = eps;
    cert.K = K;
    for (const auto& a : av)
      for (Eigen::Index i = 0; i < n; ++i)
        if (K[static_cast<std::size_t>(i)]) cert.C = std::max(cert.C, a[i] + rho * V[i]);
    cert.max_violation = certificate_violation(ops, cert);
    return cert;
  }
  throw Error(ErrorCode::kNoCertificate,
              "no boundary layer gives a positive drift rate; try a larger B or a smaller "
              "enlargement");
}

namespace {

struct Enlarged {
  Grid grid;
  Field restricted;
  double min_closure = 0.0;
  double lambda = 0.0;
};

Grid enlarged_grid(const Grid& grid, double enlargement) {
  const double h = grid.h();
  const double margin =
      std::max(1.0, std::round(enlargement * grid.domain().min_side() / h)) * h;
  return Grid(grid.domain().enlarged(margin), h);
}

void restrict_eigenfunction(const Grid& grid, Enlarged& e, const Field& phi) {
  const Field scaled = phi / phi.maxCoeff();
  e.restricted = restrict_to(e.grid, scaled, grid);
  const Box& box = grid.domain();
  e.min_closure = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < e.grid.size(); ++j) {
    const Point x = e.grid.node(j);
    bool inside = true;
    for (int k = 0; k < box.dim; ++k)
      inside = inside && x[k] >= box.lo[k] - 1e-12 && x[k] <= box.hi[k] + 1e-12;
    if (inside) e.min_closure = std::min(e.min_closure, scaled[static_cast<Eigen::Index>(j)]);
  }
}

}  // namespace

LyapunovCertificate lyapunov_certificate(const ValidatedProblem& problem, const Grid& grid,
                                         const PolicySpec& policy, const QProcessModel& model,
                                         const LyapunovOptions& options,
                                         const ControlOptions& control) {
  check_policy(policy, grid.size(), problem.num_actions());
  const double radius =
      options.b_radius > 0.0 ? options.b_radius : 0.25 * grid.domain().min_side();
  Enlarged e{enlarged_grid(grid, options.enlargement), {}, 0.0, 0.0};

  PolicySpec extended = PolicySpec::uniform(e.grid.size(), 0);
  Field ball = Field::Zero(static_cast<Eigen::Index>(e.grid.size()));
  const Point c = grid.domain().center();
  for (std::size_t j = 0; j < e.grid.size(); ++j) {
    const Point x = e.grid.node(j);
    extended.assignment[j] = policy[grid.nearest(x)];
    double r2 = 0.0;
    for (int k = 0; k < grid.dim(); ++k) r2 += (x[k] - c[k]) * (x[k] - c[k]);
    if (std::sqrt(r2) < radius) ball[static_cast<Eigen::Index>(j)] = 1.0;
  }
  const GeneratorMatrix big =
      with_potential(assemble_generator(e.grid, problem, extended, control.assembly), ball);
  const EigenPair eig = principal_eigenpair(big, control.eigen);
  e.lambda = eig.lambda;
  restrict_eigenfunction(grid, e, eig.psi);

  const Field V = e.restricted.cwiseQuotient(model.Psi);
  LyapunovCertificate cert = fit_certificate(grid, {model.g_tilde}, V);
  cert.Phi = e.restricted;
  cert.enlarged_lambda = e.lambda;
  cert.min_v_psi = V.cwiseProduct(model.Psi).minCoeff();
  cert.min_phi_closure = e.min_closure;
  return cert;
}

GeneratorMatrix y_generator(const GeneratorMatrix& g_v, const Field& Psi_min) {
  GeneratorMatrix y;
  y.entries = g_v.entries;
  for (Eigen::Index r = 0; r < y.entries.outerSize(); ++r) {
    double total = 0.0;
    for (SparseRowMatrix::InnerIterator it(y.entries, r); it; ++it)
      if (it.col() != r) {
        it.valueRef() = it.value() * Psi_min[it.col()] / Psi_min[r];
        total += it.value();
      }
    y.entries.coeffRef(r, r) = -total;
  }
  y.killing = Field::Zero(Psi_min.size());
  return y;
}

std::vector<PolicySpec> random_policies(std::size_t nodes, std::size_t actions,
                                        std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PolicySpec> out;
  for (std::size_t c = 0; c < count; ++c) {
    PolicySpec p = PolicySpec::uniform(nodes, 0);
    for (auto& a : p.assignment) a = static_cast<std::size_t>(rng() % actions);
    out.push_back(std::move(p));
  }
  return out;
}

UniformErgodicityReport uniform_ergodicity(const ValidatedProblem& problem, const Grid& grid,
                                           const PolicyIterationTrace& min_trace,
                                           const UniformErgodicityOptions& options,
                                           const ControlOptions& control) {
  UniformErgodicityReport report;
  report.lambda_min = min_trace.lambda();
  report.h = grid.h();
  const Field& Psi_min = min_trace.eigen.psi;
  const Field psi_min = Psi_min.array().log().matrix();

  // Enlarged-domain eigenfunction of the maximal operator with extra killing
  // 2 lambda_* on the interior layer of the original box.
  Enlarged e{enlarged_grid(grid, options.lyapunov.enlargement), {}, 0.0, 0.0};
  const Box inner = grid.domain().shrunk(2.0 * grid.h());
  Field cutoff = Field::Zero(static_cast<Eigen::Index>(e.grid.size()));
  for (std::size_t j = 0; j < e.grid.size(); ++j)
    if (inner.contains(e.grid.node(j)))
      cutoff[static_cast<Eigen::Index>(j)] = 2.0 * report.lambda_min;
  const auto big = policy_iteration(problem, e.grid, Mode::kMax, control, cutoff);
  e.lambda = big.lambda();
  restrict_eigenfunction(grid, e, big.eigen.psi);

  std::vector<GeneratorMatrix> ops;
  for (const auto& g : action_generators(grid, problem, control.assembly))
    ops.push_back(y_generator(g, Psi_min));
  const Field V = e.restricted.cwiseQuotient(Psi_min);
  try {
    report.certificate = fit_certificate(grid, ops, V);
    report.certificate.Phi = e.restricted;
    report.certificate.enlarged_lambda = e.lambda;
    report.certificate.min_v_psi = V.cwiseProduct(Psi_min).minCoeff();
    report.certificate.min_phi_closure = e.min_closure;
    report.certificate_ok = report.certificate.max_violation <= 1e-9 * report.certificate.C + 1e-12;
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kNoCertificate) throw;
    report.certificate_ok = false;
  }

  const auto policies =
      random_policies(grid.size(), problem.num_actions(), options.sample_policies, options.seed);
  report.policies.resize(policies.size());
  parallel_for(policies.size(), [&](std::size_t k) {
    const GeneratorMatrix y =
        y_generator(assemble_generator(grid, problem, policies[k], control.assembly), Psi_min);
    const Field mu = stationary_distribution(y);
    PolicyInequality& out = report.policies[k];
    out.policy = policies[k];
    out.energy = energy_functional(grid, problem, psi_min, mu);
    out.slack = options.slack_constant * grid.h();
    out.margin = report.lambda_min - out.energy + out.slack;
    out.holds = out.margin >= 0.0;
  });
  report.inequality_ok = std::all_of(report.policies.begin(), report.policies.end(),
                                     [](const PolicyInequality& p) { return p.holds; });
  return report;
}

namespace {

double ground_state_ratio(const Grid& grid, const ValidatedProblem& problem, const Field& Psi,
                          const Field& alpha) {
  const auto grad = discrete_gradient(grid, Psi, Extension::kDirichletZero);
  std::vector<double> num(grid.size()), den(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const Vec2 a = problem.diffusion(grid.node(i));
    double q = 0.0;
    for (int d = 0; d < grid.dim(); ++d) q += a[d] * grad[i][d] * grad[i][d];
    num[i] = q / Psi[k] * alpha[k];
    den[i] = Psi[k] * alpha[k];
  }
  return pairwise_sum(num) / (2.0 * pairwise_sum(den));
}

}  // namespace

Representations exit_rate_representations(const ValidatedProblem& problem, double h,
                                          const ControlOptions& options) {
  const Grid grid = build_grid(problem, h);
  const PolicyIterationTrace trace = policy_iteration(problem, grid, Mode::kMax, options);
  Representations r;
  r.lambda = trace.lambda();
  const QProcessModel star = build_qprocess(trace.generator, trace.eigen);
  r.values[0] = energy_functional(grid, problem, star.psi, star.mu_tilde);
  r.values[2] = ground_state_ratio(grid, problem, star.Psi, star.alpha);
  r.values[1] = r.values[0];
  r.values[3] = r.values[2];
  for (const auto& step : trace.steps) {
    const GeneratorMatrix g = assemble_generator(grid, problem, step.policy, options.assembly);
    const EigenPair eig = principal_eigenpair(g, options.eigen);
    const QProcessModel q = build_qprocess(g, eig);
    r.values[1] = std::min(r.values[1], energy_functional(grid, problem, q.psi, q.mu_tilde));
    r.values[3] = std::min(r.values[3], ground_state_ratio(grid, problem, q.Psi, q.alpha));
  }
  r.policies = trace.steps.size();
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      r.max_pairwise_difference =
          std::max(r.max_pairwise_difference,
                   std::abs(r.values[a] - r.values[b]) / std::min(r.values[a], r.values[b]));
  return r;
}

std::string measures_csv(const Grid& grid, const QProcessModel& model, const EigenPair& eigen,
                         const Field* V) {
  std::ostringstream os;
  os << std::setprecision(17) << (grid.dim() == 1 ? "x" : "x1,x2") << ",mu_tilde,alpha,Psi,phi";
  if (V) os << ",V";
  os << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const Point x = grid.node(i);
    os << x[0];
    if (grid.dim() == 2) os << ',' << x[1];
    os << ',' << model.mu_tilde[k] << ',' << model.alpha[k] << ',' << model.Psi[k] << ','
       << eigen.phi[k];
    if (V) os << ',' << (*V)[k];
    os << '\n';
  }
  return os.str();
}

}  // namespace exitrate
