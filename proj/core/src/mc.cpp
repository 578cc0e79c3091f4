#include "exitrate/mc.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "exitrate/error.hpp"
#include "exitrate/parallel.hpp"

namespace exitrate {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kKilledStream = 0x6b696c6cULL;
constexpr std::uint64_t kQStream = 0x71707263ULL;
constexpr std::uint64_t kBootstrapStream = 0x626f6f74ULL;

bool inside(const Box& box, const Point& x) { return box.contains(x); }

Point project_into(const Box& box, Point x, double eps) {
  for (int k = 0; k < box.dim; ++k) x[k] = std::clamp(x[k], box.lo[k] + eps, box.hi[k] - eps);
  return x;
}

}  // namespace

std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)),
                    static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                    static_cast<std::uint32_t>(splitmix64(seed ^ splitmix64(index))),
                    static_cast<std::uint32_t>(splitmix64(seed ^ splitmix64(index)) >> 32)};
  return std::mt19937_64(seq);
}

FeedbackPolicy::FeedbackPolicy(Grid grid, PolicySpec policy)
    : grid_(std::move(grid)), policy_(std::move(policy)) {
  if (policy_.size() != grid_.size())
    throw Error(ErrorCode::kInvalidPolicy, "feedback policy does not match its grid");
}

FeedbackPolicy FeedbackPolicy::constant(const Grid& grid, std::size_t action) {
  return FeedbackPolicy(grid, PolicySpec::uniform(grid.size(), action));
}

NodalInterpolant::NodalInterpolant(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error(ErrorCode::kInvalidArgument, "field does not match the grid");
}

double NodalInterpolant::operator()(const Point& x) const {
  const double h = grid_.h();
  std::array<int, 2> base{0, 0};
  std::array<double, 2> frac{0.0, 0.0};
  for (int k = 0; k < grid_.dim(); ++k) {
    double s = (x[k] - grid_.domain().lo[k]) / h - 1.0;
    s = std::clamp(s, 0.0, static_cast<double>(grid_.count(k) - 1));
    int i = std::min(static_cast<int>(std::floor(s)), std::max(grid_.count(k) - 2, 0));
    base[k] = i;
    frac[k] = grid_.count(k) > 1 ? s - i : 0.0;
  }
  auto at = [&](int i0, int i1) {
    i0 = std::min(i0, grid_.count(0) - 1);
    i1 = std::min(i1, grid_.count(1) - 1);
    return values_[grid_.flat_index(i0, i1)];
  };
  if (grid_.dim() == 1)
    return (1.0 - frac[0]) * at(base[0], 0) + frac[0] * at(base[0] + 1, 0);
  return (1.0 - frac[0]) * (1.0 - frac[1]) * at(base[0], base[1]) +
         frac[0] * (1.0 - frac[1]) * at(base[0] + 1, base[1]) +
         (1.0 - frac[0]) * frac[1] * at(base[0], base[1] + 1) +
         frac[0] * frac[1] * at(base[0] + 1, base[1] + 1);
}

std::size_t TrajectoryEnsemble::survivors_at(double t) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < n_paths; ++i)
    if (!exited[i] || exit_times[i] > t) ++n;
  return n;
}

double TrajectoryEnsemble::survival_fraction(double t) const {
  return static_cast<double>(survivors_at(t)) / static_cast<double>(n_paths);
}

std::string TrajectoryEnsemble::csv(int dim) const {
  std::ostringstream os;
  os << std::setprecision(17) << "path,exit_time,censored," << (dim == 1 ? "x" : "x1,x2") << '\n';
  for (std::size_t i = 0; i < n_paths; ++i) {
    os << i << ',' << exit_times[i] << ',' << (exited[i] ? 0 : 1) << ',' << terminal[i][0];
    if (dim == 2) os << ',' << terminal[i][1];
    os << '\n';
  }
  return os.str();
}

TrajectoryEnsemble simulate_killed(const ValidatedProblem& problem, const FeedbackPolicy& policy,
                                   const SimulationOptions& options) {
  const Box& box = problem.domain();
  if (!inside(box, options.x0)) throw Error(ErrorCode::kInvalidArgument, "x0 is not in the domain");
  if (!(options.dt > 0.0) || !(options.T >= 0.0))
    throw Error(ErrorCode::kInvalidArgument, "dt must be positive and T nonnegative");
  TrajectoryEnsemble ens;
  ens.n_paths = options.n_paths;
  ens.dt = options.dt;
  ens.T = options.T;
  ens.seed = options.seed;
  ens.exit_times.assign(options.n_paths, options.T);
  ens.exited.assign(options.n_paths, 0);
  ens.terminal.assign(options.n_paths, options.x0);
  const auto steps = static_cast<std::size_t>(std::llround(options.T / options.dt));
  const double sqdt = std::sqrt(options.dt);
  const int dim = box.dim;

  parallel_for(
      options.n_paths,
      [&](std::size_t p) {
        auto rng = path_stream(options.seed ^ kKilledStream, p);
        std::normal_distribution<double> normal;
        Point x = options.x0;
        for (std::size_t s = 0; s < steps; ++s) {
          const Vec2 m = problem.drift(x, policy.action(x));
          const Vec2 sig = problem.sigma(x);
          for (int k = 0; k < dim; ++k) x[k] += m[k] * options.dt + sig[k] * sqdt * normal(rng);
          if (!inside(box, x)) {
            ens.exited[p] = 1;
            ens.exit_times[p] = static_cast<double>(s + 1) * options.dt;
            break;
          }
        }
        ens.terminal[p] = x;
      },
      options.workers);
  return ens;
}

namespace {

double survival_slope(const std::vector<double>& times, const std::vector<std::size_t>& counts) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (counts[i] > 0) {
      x.push_back(times[i]);
      y.push_back(std::log(static_cast<double>(counts[i])));
    }
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

}  // namespace

ExitRateEstimate estimate_exit_rate(const TrajectoryEnsemble& ensemble, double t0, double t1) {
  if (!(t1 > t0) || t1 > ensemble.T + 1e-12)
    throw Error(ErrorCode::kInvalidArgument, "fit window must satisfy t0 < t1 <= T");
  ExitRateEstimate est;
  est.survivors_t0 = ensemble.survivors_at(t0);
  if (est.survivors_t0 < kMinSurvivors)
    throw Error(ErrorCode::kTooFewSurvivors, std::to_string(est.survivors_t0) +
                                                 " survivors at t0, need " +
                                                 std::to_string(kMinSurvivors));
  constexpr std::size_t kPoints = 21;
  std::vector<double> times(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i)
    times[i] = t0 + (t1 - t0) * static_cast<double>(i) / (kPoints - 1);

  // Bin each path once: the number of window times it survives past.
  const std::size_t n = ensemble.n_paths;
  std::vector<std::uint8_t> alive_through(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double tau = ensemble.exited[p] ? ensemble.exit_times[p]
                                          : std::numeric_limits<double>::infinity();
    alive_through[p] = static_cast<std::uint8_t>(
        std::upper_bound(times.begin(), times.end(), tau,
                         [](double v, double t) { return v <= t; }) -
        times.begin());
  }
  auto counts_for = [&](const auto& index_of) {
    std::vector<std::size_t> cum(kPoints + 1, 0);
    for (std::size_t p = 0; p < n; ++p) ++cum[alive_through[index_of(p)]];
    std::vector<std::size_t> counts(kPoints, 0);
    std::size_t running = 0;
    for (std::size_t k = kPoints + 1; k-- > 1;) {
      running += cum[k];
      counts[k - 1] = running;
    }
    return counts;
  };
  est.rate = -survival_slope(times, counts_for([](std::size_t p) { return p; }));

  std::vector<double> boot(kBootstrapResamples);
  for (std::size_t b = 0; b < kBootstrapResamples; ++b) {
    auto rng = path_stream(ensemble.seed ^ kBootstrapStream, b);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = pick(rng);
    boot[b] = -survival_slope(times, counts_for([&](std::size_t p) { return idx[p]; }));
  }
  const double mean = pairwise_sum(boot) / static_cast<double>(boot.size());
  std::vector<double> sq(boot.size());
  for (std::size_t b = 0; b < boot.size(); ++b) sq[b] = (boot[b] - mean) * (boot[b] - mean);
  est.standard_error = std::sqrt(pairwise_sum(sq) / static_cast<double>(boot.size() - 1));
  return est;
}

QProcessOccupancy simulate_qprocess(const ValidatedProblem& problem, const FeedbackPolicy& policy,
                                    const Field& psi, const SimulationOptions& options,
                                    const std::function<double(const Point&)>& test) {
  const Grid& grid = policy.grid();
  const Box& box = problem.domain();
  const double eps = 2.0 * grid.h();
  const Box layer = box.shrunk(eps);
  bool layer_nonempty = true;
  for (int k = 0; k < box.dim; ++k) layer_nonempty = layer_nonempty && layer.side(k) > 0.0;
  if (layer_nonempty && !layer.contains(options.x0))
    throw Error(ErrorCode::kInvalidArgument, "x0 must lie in D_2h");
  const int dim = box.dim;
  const auto grad = discrete_gradient(grid, psi, Extension::kLogZero);
  std::vector<NodalInterpolant> grad_interp;
  for (int k = 0; k < dim; ++k) {
    std::vector<double> comp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) comp[i] = grad[i][k];
    grad_interp.emplace_back(grid, std::move(comp));
  }
  const NodalInterpolant psi_interp(grid, std::vector<double>(psi.data(), psi.data() + psi.size()));

  const std::size_t n_paths = options.n_paths;
  std::vector<std::vector<double>> hist(n_paths);
  std::vector<std::size_t> steps(n_paths, 0), projections(n_paths, 0);
  std::vector<double> energy(n_paths, 0.0), terminal(n_paths, 0.0);
  const std::size_t n_steps = static_cast<std::size_t>(std::llround(options.T / options.dt));

  parallel_for(
      n_paths,
      [&](std::size_t p) {
        auto rng = path_stream(options.seed ^ kQStream, p);
        std::normal_distribution<double> normal;
        std::vector<double> h(grid.size(), 0.0);
        Point x = options.x0;
        double e = 0.0;
        for (std::size_t s = 0; s < n_steps; ++s) {
          double remaining = options.dt;
          while (remaining > 0.0) {
            Vec2 g{0.0, 0.0};
            for (int k = 0; k < dim; ++k) g[k] = grad_interp[k](x);
            const Vec2 m = problem.drift(x, policy.action(x));
            const Vec2 a = problem.diffusion(x);
            const Vec2 sig = problem.sigma(x);
            double xi[2] = {normal(rng), dim == 2 ? normal(rng) : 0.0};
            double step = remaining;
            Point y = x;
            int halvings = 0;
            for (;;) {
              for (int k = 0; k < dim; ++k)
                y[k] = x[k] + (m[k] + a[k] * g[k]) * step + sig[k] * std::sqrt(step) * xi[k];
              if (inside(box, y)) break;
              if (++halvings > 20) {
                y = project_into(box, y, eps);
                ++projections[p];
                break;
              }
              step *= 0.5;
            }
            double quad = 0.0;
            for (int k = 0; k < dim; ++k) quad += a[k] * g[k] * g[k];
            e += 0.5 * quad * step;
            h[grid.nearest(x)] += step;
            x = y;
            remaining -= step;
            ++steps[p];
            if (remaining < 1e-15 * options.dt) remaining = 0.0;
          }
        }
        hist[p] = std::move(h);
        energy[p] = options.T > 0.0 ? e / options.T : 0.0;
        if (test) terminal[p] = test(x) * std::exp(-psi_interp(x));
        if (n_steps == 0) {
          hist[p].assign(grid.size(), 0.0);
          hist[p][grid.nearest(x)] = 1.0;
        }
      },
      options.workers);

  QProcessOccupancy out;
  out.histogram.assign(grid.size(), 0.0);
  std::vector<double> column(n_paths);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t p = 0; p < n_paths; ++p) column[p] = hist[p][i];
    out.histogram[i] = pairwise_sum(column);
  }
  const double total = pairwise_sum(out.histogram);
  if (total > 0.0)
    for (auto& v : out.histogram) v /= total;
  for (std::size_t p = 0; p < n_paths; ++p) {
    out.steps += steps[p];
    out.projections += projections[p];
  }
  out.energy_average = n_paths ? pairwise_sum(energy) / static_cast<double>(n_paths) : 0.0;
  if (test) out.weighted_terminal = std::move(terminal);
  return out;
}

CtmcPath simulate_ctmc(const GeneratorMatrix& g, std::size_t x0, double T, std::uint64_t seed,
                       std::uint64_t stream) {
  if (x0 >= g.size()) throw Error(ErrorCode::kInvalidArgument, "x0 is not a state");
  auto rng = path_stream(seed, stream);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  CtmcPath path;
  path.occupation.assign(g.size(), 0.0);
  std::size_t state = x0;
  double t = 0.0;
  path.times.push_back(0.0);
  path.states.push_back(state);
  for (;;) {
    const auto r = static_cast<Eigen::Index>(state);
    const double total = -g.entries.coeff(r, r);
    if (!(total > 0.0)) {
      path.occupation[state] += T - t;
      path.end_time = T;
      return path;
    }
    const double hold = -std::log1p(-unif(rng)) / total;
    if (t + hold >= T) {
      path.occupation[state] += T - t;
      path.end_time = T;
      return path;
    }
    path.occupation[state] += hold;
    t += hold;
    double u = unif(rng) * total;
    std::size_t next = state;
    bool moved = false;
    for (SparseRowMatrix::InnerIterator it(g.entries, r); it; ++it) {
      if (it.col() == r) continue;
      if (u < it.value()) {
        next = static_cast<std::size_t>(it.col());
        moved = true;
        break;
      }
      u -= it.value();
    }
    if (!moved) {
      path.killed = true;
      path.end_time = t;
      return path;
    }
    state = next;
    path.times.push_back(t);
    path.states.push_back(state);
  }
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(v.size());
  const double mean = pairwise_sum(v) / n;
  if (v.size() < 2) return {mean, 0.0};
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  return {mean, std::sqrt(pairwise_sum(sq) / (n - 1.0) / n)};
}

GirsanovEstimate mc_girsanov_check(const ValidatedProblem& problem, const FeedbackPolicy& policy,
                                   double lambda, const Field& psi,
                                   const std::function<double(const Point&)>& g,
                                   const GirsanovMcOptions& options) {
  GirsanovEstimate est;
  SimulationOptions killed{options.x0, options.dt_killed, options.t, options.n_paths,
                           options.seed, options.workers};
  const TrajectoryEnsemble ens = simulate_killed(problem, policy, killed);
  std::vector<double> lhs(options.n_paths);
  for (std::size_t p = 0; p < options.n_paths; ++p)
    lhs[p] = ens.exited[p] ? 0.0 : g(ens.terminal[p]);
  std::tie(est.lhs, est.lhs_stderr) = mean_and_stderr(lhs);

  SimulationOptions q{options.x0, options.dt_qprocess, options.t, options.n_paths, options.seed,
                      options.workers};
  const QProcessOccupancy occ = simulate_qprocess(problem, policy, psi, q, g);
  const NodalInterpolant psi_interp(policy.grid(),
                                    std::vector<double>(psi.data(), psi.data() + psi.size()));
  const double factor = std::exp(-lambda * options.t + psi_interp(options.x0));
  auto [mean, se] = mean_and_stderr(occ.weighted_terminal);
  est.rhs = factor * mean;
  est.rhs_stderr = factor * se;
  const double z = 1.959963984540054;
  est.overlap = std::abs(est.lhs - est.rhs) <= z * (est.lhs_stderr + est.rhs_stderr);
  return est;
}

}  // namespace exitrate
