#include "cli/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "exitrate/error.hpp"
#include "exitrate/grid.hpp"

namespace exitrate::cli {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be positive");
}

}  // namespace

ValidatedProblem validate_config(const RunConfig& config) {
  if (config.h != 0.0) require_positive(config.h, "--h");
  require_positive(config.tol, "--tol");
  require_positive(config.dt, "--dt");
  require_positive(config.T, "--T");
  if (config.paths == 0) throw Error(ErrorCode::kInvalidArgument, "--paths must be positive");
  if (!config.out.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.out, ec);
    const fs::path probe = fs::path(config.out) / ".write-test";
    std::ofstream f(probe);
    if (ec || !f)
      throw Error(ErrorCode::kIo, "output directory '" + config.out + "' is not writable");
    f.close();
    fs::remove(probe, ec);
  }
  ValidatedProblem problem = validate_problem(resolve_problem(config.problem));
  if (config.action >= problem.num_actions())
    throw Error(ErrorCode::kInvalidArgument, "--action is out of range for this problem");
  return problem;
}

double resolved_spacing(const RunConfig& config, const ValidatedProblem& problem) {
  return config.h > 0.0 ? config.h : default_spacing(problem.dim());
}

Json config_to_json(const RunConfig& config) {
  Json j;
  j["problem"] = config.problem;
  j["h"] = config.h;
  j["tol"] = config.tol;
  j["mode"] = std::string(to_string(config.mode));
  j["action"] = config.action;
  j["dt"] = config.dt;
  j["T"] = config.T;
  j["paths"] = config.paths;
  j["seed"] = config.seed;
  j["out"] = config.out;
  return j;
}

ControlOptions control_options(const RunConfig& config) {
  ControlOptions options;
  options.eigen.tol = config.tol;
  return options;
}

}  // namespace exitrate::cli
