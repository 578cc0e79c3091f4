#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "exitrate/types.hpp"

namespace exitrate {

/// Open axis-aligned box in R^d, d in {1, 2}.
struct Box {
  int dim = 1;
  Point lo{0.0, 0.0};
  Point hi{1.0, 0.0};

  double side(int axis) const { return hi[axis] - lo[axis]; }
  double min_side() const;
  Point center() const;
  bool contains(const Point& x) const;
  /// Euclidean distance from an interior point to the boundary.
  double distance_to_boundary(const Point& x) const;
  Box enlarged(double margin) const;
  Box shrunk(double margin) const;
};

/// Drift m(x, u) for action index u.
using DriftFn = std::function<Vec2(const Point&, std::size_t)>;
/// Diagonal of sigma(x); the diffusion matrix is a = diag(sigma)^2.
using SigmaFn = std::function<Vec2(const Point&)>;

/// A controlled diffusion dX = m(X, U) dt + sigma(X) dW killed on leaving
/// the box, with a finite action set.
struct ProblemSpec {
  std::string name;
  Box domain;
  std::vector<std::string> actions;
  DriftFn drift;
  SigmaFn sigma;
  double ellipticity_floor = 1.0;
  /// Named scalar parameters used to build the coefficients (reported only).
  std::map<std::string, double> parameters;
  /// Expression sources when the spec was loaded from a problem file.
  std::vector<std::vector<std::string>> drift_sources;
  std::vector<std::string> sigma_sources;

  int dim() const { return domain.dim; }
  std::size_t num_actions() const { return actions.size(); }
};

inline constexpr std::size_t kMaxActions = 64;

class ValidatedProblem {
 public:
  const ProblemSpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }
  const Box& domain() const { return spec_.domain; }
  int dim() const { return spec_.domain.dim; }
  std::size_t num_actions() const { return spec_.actions.size(); }

  Vec2 drift(const Point& x, std::size_t action) const { return spec_.drift(x, action); }
  Vec2 sigma(const Point& x) const { return spec_.sigma(x); }
  /// Diagonal of a(x) = sigma sigma^T.
  Vec2 diffusion(const Point& x) const;

  /// min over the validation lattice of |sigma^T y|^2 / |y|^2.
  double sampled_floor() const { return sampled_floor_; }
  /// max over adjacent lattice points of the coefficient difference quotients.
  double lipschitz_estimate() const { return lipschitz_estimate_; }

 private:
  friend ValidatedProblem validate_problem(ProblemSpec spec);

  ProblemSpec spec_;
  double sampled_floor_ = 0.0;
  double lipschitz_estimate_ = 0.0;
};

/// Checks positivity of the box, the ellipticity floor and finiteness of
/// every coefficient on the validation lattice (257 points per axis in 1-D,
/// 129 per axis in 2-D, boundary included).
ValidatedProblem validate_problem(ProblemSpec spec);
ValidatedProblem validate_problem(const ValidatedProblem& problem);

/// Stationary Markov policy: one action index per interior grid node.
struct PolicySpec {
  std::vector<std::size_t> assignment;

  static PolicySpec uniform(std::size_t nodes, std::size_t action) {
    return PolicySpec{std::vector<std::size_t>(nodes, action)};
  }
  std::size_t size() const { return assignment.size(); }
  std::size_t operator[](std::size_t i) const { return assignment[i]; }
  bool operator==(const PolicySpec&) const = default;
};

void check_policy(const PolicySpec& policy, std::size_t nodes, std::size_t num_actions);

struct CatalogEntry {
  std::string name;
  std::string description;
  ProblemSpec spec;
};

/// bm-interval, drift-interval (c), bang-bang, rect-2d (b). Parameters not
/// supplied take the defaults c = 1, b = 1.
std::vector<CatalogEntry> builtin_catalog(const std::map<std::string, double>& parameters = {});

ProblemSpec bm_interval();
ProblemSpec drift_interval(double c);
ProblemSpec bang_bang();
/// With `single_action` the action set is {0} (pure Brownian motion on the square).
ProblemSpec rect_2d(double b, bool single_action = false);

/// Parses a problem document:
///   {name, dim, bounds: [[lo,hi],...], actions: [label,...],
///    drift: [[expr per coordinate] per action], sigma: [expr per coordinate],
///    c0, parameters?: {name: value}}
ProblemSpec problem_from_json(const std::string& text);
ProblemSpec load_problem_file(const std::string& path);
std::string problem_to_json(const ProblemSpec& spec);

/// Resolves "name" or "name:key=value,key=value" against the catalog, or a
/// path to a problem file.
ProblemSpec resolve_problem(const std::string& reference);

}  // namespace exitrate
