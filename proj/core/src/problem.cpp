#include "exitrate/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "exitrate/error.hpp"
#include "exitrate/expression.hpp"

namespace exitrate {

double Box::min_side() const {
  double s = side(0);
  if (dim == 2) s = std::min(s, side(1));
  return s;
}

Point Box::center() const {
  Point c{0.0, 0.0};
  for (int k = 0; k < dim; ++k) c[k] = 0.5 * (lo[k] + hi[k]);
  return c;
}

bool Box::contains(const Point& x) const {
  for (int k = 0; k < dim; ++k)
    if (!(x[k] > lo[k] && x[k] < hi[k])) return false;
  return true;
}

double Box::distance_to_boundary(const Point& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dim; ++k) d = std::min({d, x[k] - lo[k], hi[k] - x[k]});
  return d;
}

Box Box::enlarged(double margin) const {
  Box b = *this;
  for (int k = 0; k < dim; ++k) {
    b.lo[k] -= margin;
    b.hi[k] += margin;
  }
  return b;
}

Box Box::shrunk(double margin) const { return enlarged(-margin); }

Vec2 ValidatedProblem::diffusion(const Point& x) const {
  Vec2 s = spec_.sigma(x);
  return {s[0] * s[0], s[1] * s[1]};
}

namespace {

std::vector<Point> validation_lattice(const Box& box) {
  const int per_axis = box.dim == 1 ? 257 : 129;
  std::vector<Point> pts;
  if (box.dim == 1) {
    pts.reserve(per_axis);
    for (int i = 0; i < per_axis; ++i)
      pts.push_back({box.lo[0] + box.side(0) * i / (per_axis - 1), 0.0});
  } else {
    pts.reserve(static_cast<std::size_t>(per_axis) * per_axis);
    for (int j = 0; j < per_axis; ++j)
      for (int i = 0; i < per_axis; ++i)
        pts.push_back({box.lo[0] + box.side(0) * i / (per_axis - 1),
                       box.lo[1] + box.side(1) * j / (per_axis - 1)});
  }
  return pts;
}

bool finite(const Vec2& v, int dim) {
  for (int k = 0; k < dim; ++k)
    if (!std::isfinite(v[k])) return false;
  return true;
}

double diff_norm(const Vec2& a, const Vec2& b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

std::string point_str(const Point& x, int dim) {
  std::ostringstream os;
  os << "(" << x[0];
  if (dim == 2) os << ", " << x[1];
  os << ")";
  return os.str();
}

}  // namespace

ValidatedProblem validate_problem(ProblemSpec spec) {
  const Box& box = spec.domain;
  if (box.dim != 1 && box.dim != 2)
    throw Error(ErrorCode::kInvalidProblem, "dimension must be 1 or 2");
  for (int k = 0; k < box.dim; ++k)
    if (!(box.side(k) > 0.0) || !std::isfinite(box.side(k)))
      throw Error(ErrorCode::kInvalidProblem, "domain side lengths must be positive");
  if (spec.actions.empty() || spec.actions.size() > kMaxActions)
    throw Error(ErrorCode::kInvalidProblem, "action set size must be in [1, 64]");
  if (!spec.drift || !spec.sigma)
    throw Error(ErrorCode::kInvalidProblem, "drift and sigma must be set");
  if (!(spec.ellipticity_floor > 0.0))
    throw Error(ErrorCode::kInvalidProblem, "ellipticity floor c0 must be positive");

  const int dim = box.dim;
  const std::size_t K = spec.actions.size();
  const auto lattice = validation_lattice(box);
  const int per_axis = dim == 1 ? 257 : 129;

  double floor = std::numeric_limits<double>::infinity();
  std::vector<Vec2> sig(lattice.size());
  std::vector<std::vector<Vec2>> drift(K, std::vector<Vec2>(lattice.size()));
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    sig[i] = spec.sigma(lattice[i]);
    if (!finite(sig[i], dim))
      throw Error(ErrorCode::kNonFiniteCoefficient,
                  "sigma is not finite at " + point_str(lattice[i], dim));
    // sigma is diagonal, so min over unit y of |sigma^T y|^2 is min_k sigma_kk^2.
    for (int k = 0; k < dim; ++k) floor = std::min(floor, sig[i][k] * sig[i][k]);
    for (std::size_t u = 0; u < K; ++u) {
      drift[u][i] = spec.drift(lattice[i], u);
      if (!finite(drift[u][i], dim))
        throw Error(ErrorCode::kNonFiniteCoefficient,
                    "drift for action '" + spec.actions[u] + "' is not finite at " +
                        point_str(lattice[i], dim));
    }
  }
  if (floor < spec.ellipticity_floor)
    throw Error(ErrorCode::kEllipticityViolation,
                "sampled |sigma^T y|^2/|y|^2 = " + std::to_string(floor) + " < c0 = " +
                    std::to_string(spec.ellipticity_floor));

  double lip = 0.0;
  auto pair_quotient = [&](std::size_t i, std::size_t j) {
    double dist = diff_norm(lattice[i], lattice[j], dim);
    lip = std::max(lip, diff_norm(sig[i], sig[j], dim) / dist);
    for (std::size_t u = 0; u < K; ++u)
      lip = std::max(lip, diff_norm(drift[u][i], drift[u][j], dim) / dist);
  };
  if (dim == 1) {
    for (int i = 0; i + 1 < per_axis; ++i) pair_quotient(i, i + 1);
  } else {
    for (int j = 0; j < per_axis; ++j)
      for (int i = 0; i < per_axis; ++i) {
        std::size_t idx = static_cast<std::size_t>(j * per_axis + i);
        if (i + 1 < per_axis) pair_quotient(idx, idx + 1);
        if (j + 1 < per_axis) pair_quotient(idx, idx + per_axis);
      }
  }

  ValidatedProblem out;
  out.spec_ = std::move(spec);
  out.sampled_floor_ = floor;
  out.lipschitz_estimate_ = lip;
  return out;
}

ValidatedProblem validate_problem(const ValidatedProblem& problem) {
  return validate_problem(problem.spec());
}

void check_policy(const PolicySpec& policy, std::size_t nodes, std::size_t num_actions) {
  if (policy.size() != nodes)
    throw Error(ErrorCode::kInvalidPolicy, "policy has " + std::to_string(policy.size()) +
                                               " entries for " + std::to_string(nodes) +
                                               " interior nodes");
  for (std::size_t i = 0; i < nodes; ++i)
    if (policy[i] >= num_actions)
      throw Error(ErrorCode::kInvalidPolicy,
                  "action index " + std::to_string(policy[i]) + " out of range at node " +
                      std::to_string(i));
}

// ---------------------------------------------------------------------------
// Catalog

ProblemSpec bm_interval() {
  ProblemSpec p;
  p.name = "bm-interval";
  p.domain = Box{1, {0.0, 0.0}, {1.0, 0.0}};
  p.actions = {"none"};
  p.drift = [](const Point&, std::size_t) { return Vec2{0.0, 0.0}; };
  p.sigma = [](const Point&) { return Vec2{1.0, 0.0}; };
  p.ellipticity_floor = 1.0;
  p.drift_sources = {{"0"}};
  p.sigma_sources = {"1"};
  return p;
}

ProblemSpec drift_interval(double c) {
  ProblemSpec p;
  p.name = "drift-interval";
  p.domain = Box{1, {0.0, 0.0}, {1.0, 0.0}};
  p.actions = {"drift"};
  p.drift = [c](const Point&, std::size_t) { return Vec2{c, 0.0}; };
  p.sigma = [](const Point&) { return Vec2{1.0, 0.0}; };
  p.ellipticity_floor = 1.0;
  p.parameters = {{"c", c}};
  p.drift_sources = {{"c"}};
  p.sigma_sources = {"1"};
  return p;
}

ProblemSpec bang_bang() {
  ProblemSpec p;
  p.name = "bang-bang";
  p.domain = Box{1, {-1.0, 0.0}, {1.0, 0.0}};
  p.actions = {"-1", "+1"};
  p.drift = [](const Point&, std::size_t u) { return Vec2{u == 0 ? -1.0 : 1.0, 0.0}; };
  p.sigma = [](const Point&) { return Vec2{1.0, 0.0}; };
  p.ellipticity_floor = 1.0;
  p.drift_sources = {{"-1"}, {"1"}};
  p.sigma_sources = {"1"};
  return p;
}

ProblemSpec rect_2d(double b, bool single_action) {
  ProblemSpec p;
  p.name = "rect-2d";
  p.domain = Box{2, {0.0, 0.0}, {1.0, 1.0}};
  if (single_action) {
    p.actions = {"0"};
    p.drift = [](const Point&, std::size_t) { return Vec2{0.0, 0.0}; };
    p.drift_sources = {{"0", "0"}};
  } else {
    p.actions = {"-b", "0", "+b"};
    p.drift = [b](const Point&, std::size_t u) {
      return Vec2{(static_cast<double>(u) - 1.0) * b, 0.0};
    };
    p.drift_sources = {{"-b", "0"}, {"0", "0"}, {"b", "0"}};
  }
  p.sigma = [](const Point&) { return Vec2{1.0, 1.0}; };
  p.ellipticity_floor = 1.0;
  p.parameters = {{"b", b}};
  p.sigma_sources = {"1", "1"};
  return p;
}

std::vector<CatalogEntry> builtin_catalog(const std::map<std::string, double>& parameters) {
  auto get = [&](const char* key, double fallback) {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : it->second;
  };
  return {
      {"bm-interval", "Brownian motion on (0,1), single action", bm_interval()},
      {"drift-interval", "Brownian motion with constant drift c on (0,1)",
       drift_interval(get("c", 1.0))},
      {"bang-bang", "unit-noise diffusion on (-1,1) with drift u in {-1,+1}", bang_bang()},
      {"rect-2d", "Brownian motion on (0,1)^2 with horizontal drift in {-b,0,+b}",
       rect_2d(get("b", 1.0))},
  };
}

// ---------------------------------------------------------------------------
// Problem files

ProblemSpec problem_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("problem file: ") + e.what());
  }
  try {
    ProblemSpec p;
    p.name = doc.value("name", std::string("unnamed"));
    const int dim = doc.at("dim").get<int>();
    if (dim != 1 && dim != 2) throw Error(ErrorCode::kInvalidProblem, "dim must be 1 or 2");
    const auto& bounds = doc.at("bounds");
    if (static_cast<int>(bounds.size()) != dim)
      throw Error(ErrorCode::kInvalidProblem, "bounds must have one [lo,hi] pair per axis");
    p.domain.dim = dim;
    p.domain.hi = {0.0, 0.0};
    for (int k = 0; k < dim; ++k) {
      p.domain.lo[k] = bounds[k].at(0).get<double>();
      p.domain.hi[k] = bounds[k].at(1).get<double>();
    }
    p.actions = doc.at("actions").get<std::vector<std::string>>();
    if (doc.contains("parameters"))
      p.parameters = doc.at("parameters").get<std::map<std::string, double>>();
    p.ellipticity_floor = doc.at("c0").get<double>();

    const auto& drift = doc.at("drift");
    if (drift.size() != p.actions.size())
      throw Error(ErrorCode::kInvalidProblem, "drift needs one entry per action");
    auto drift_exprs = std::make_shared<std::vector<std::vector<Expression>>>();
    for (const auto& per_action : drift) {
      if (static_cast<int>(per_action.size()) != dim)
        throw Error(ErrorCode::kInvalidProblem, "drift entry needs one expression per axis");
      std::vector<Expression> comps;
      std::vector<std::string> sources;
      for (const auto& e : per_action) {
        sources.push_back(e.get<std::string>());
        comps.push_back(Expression::parse(sources.back(), p.parameters));
      }
      drift_exprs->push_back(std::move(comps));
      p.drift_sources.push_back(std::move(sources));
    }
    const auto& sigma = doc.at("sigma");
    if (static_cast<int>(sigma.size()) != dim)
      throw Error(ErrorCode::kInvalidProblem, "sigma needs one expression per axis");
    auto sigma_exprs = std::make_shared<std::vector<Expression>>();
    for (const auto& e : sigma) {
      p.sigma_sources.push_back(e.get<std::string>());
      sigma_exprs->push_back(Expression::parse(p.sigma_sources.back(), p.parameters));
    }

    p.drift = [drift_exprs, dim](const Point& x, std::size_t u) {
      Vec2 v{0.0, 0.0};
      for (int k = 0; k < dim; ++k) v[k] = (*drift_exprs)[u][k].evaluate(x);
      return v;
    };
    p.sigma = [sigma_exprs, dim](const Point& x) {
      Vec2 v{0.0, 0.0};
      for (int k = 0; k < dim; ++k) v[k] = (*sigma_exprs)[k].evaluate(x);
      return v;
    };
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("problem file: ") + e.what());
  }
}

ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return problem_from_json(ss.str());
}

std::string problem_to_json(const ProblemSpec& spec) {
  nlohmann::json doc;
  doc["name"] = spec.name;
  doc["dim"] = spec.dim();
  nlohmann::json bounds = nlohmann::json::array();
  for (int k = 0; k < spec.dim(); ++k) bounds.push_back({spec.domain.lo[k], spec.domain.hi[k]});
  doc["bounds"] = bounds;
  doc["actions"] = spec.actions;
  doc["drift"] = spec.drift_sources;
  doc["sigma"] = spec.sigma_sources;
  doc["c0"] = spec.ellipticity_floor;
  if (!spec.parameters.empty()) doc["parameters"] = spec.parameters;
  return doc.dump(2);
}

ProblemSpec resolve_problem(const std::string& reference) {
  std::string name = reference;
  std::map<std::string, double> params;
  if (auto colon = reference.find(':'); colon != std::string::npos) {
    name = reference.substr(0, colon);
    std::stringstream rest(reference.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos)
        throw Error(ErrorCode::kInvalidArgument, "expected key=value in '" + item + "'");
      try {
        params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kInvalidArgument, "bad parameter value in '" + item + "'");
      }
    }
  }
  for (auto& entry : builtin_catalog(params))
    if (entry.name == name) return entry.spec;
  if (name == "rect-2d-free") return rect_2d(1.0, true);
  return load_problem_file(reference);
}

}  // namespace exitrate
