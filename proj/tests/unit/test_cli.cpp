#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "exitrate/error.hpp"

#include "cli/commands.hpp"
#include "cli/verify.hpp"

using namespace exitrate;
using namespace exitrate::cli;

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("exitrate-test-" + name);
  fs::remove_all(p);
  return p;
}

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run_cli(const std::string& args) {
  const fs::path dir = scratch_dir("cli-run");
  fs::create_directories(dir);
  const std::string cmd = std::string("\"") + EXITRATE_CLI_PATH + "\" " + args + " > \"" +
                          (dir / "out").string() + "\" 2> \"" + (dir / "err").string() + "\"";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(dir / "out"), slurp(dir / "err")};
}

}  // namespace

TEST(Config, RejectsNonPositiveNumbers) {
  RunConfig c;
  c.dt = -1.0;
  EXPECT_THROW(validate_config(c), Error);
  c = RunConfig{};
  c.paths = 0;
  EXPECT_THROW(validate_config(c), Error);
  c = RunConfig{};
  c.h = -0.5;
  EXPECT_THROW(validate_config(c), Error);
}

TEST(Config, RejectsMissingProblemAndUnwritableOutput) {
  RunConfig c;
  c.problem = "/definitely/not/here.json";
  try {
    validate_config(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  c = RunConfig{};
  c.out = "/proc/exitrate-no-write";
  EXPECT_THROW(validate_config(c), Error);
}

TEST(Config, SpacingDefaultsByDimension) {
  RunConfig c;
  EXPECT_DOUBLE_EQ(resolved_spacing(c, validate_problem(bm_interval())), 1.0 / 64);
  EXPECT_DOUBLE_EQ(resolved_spacing(c, validate_problem(rect_2d(1.0))), 1.0 / 32);
  c.h = 0.125;
  EXPECT_DOUBLE_EQ(resolved_spacing(c, validate_problem(rect_2d(1.0))), 0.125);
}

TEST(Commands, ReportsCarryTheConfigAndSeed) {
  RunConfig c;
  c.seed = 77;
  const CommandResult r = cmd_solve(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(r.report["seed"], 77);
  EXPECT_EQ(r.report["config"]["problem"], "bm-interval");
  EXPECT_EQ(r.report["config"]["seed"], 77);
  EXPECT_NEAR(r.report["eigen"]["lambda"].get<double>(), 4.9348, 2e-3);
}

TEST(Commands, OptimizeInBothModes) {
  RunConfig c;
  c.problem = "bang-bang";
  c.h = 1.0 / 16;
  const double best = cmd_optimize(c).report["eigen"]["lambda"].get<double>();
  c.mode = Mode::kMin;
  const double worst = cmd_optimize(c).report["eigen"]["lambda"].get<double>();
  EXPECT_GT(worst, best);
}

TEST(Commands, RepresentationsOnTheInterval) {
  RunConfig c;
  const CommandResult r = cmd_representations(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_LE(r.report["max_pairwise_difference"].get<double>(), 0.05);
}

TEST(Commands, QProcessAndVariationalReports) {
  RunConfig c;
  c.problem = "bang-bang";
  c.h = 1.0 / 16;
  const CommandResult q = cmd_qprocess(c);
  EXPECT_LE(q.report["model"]["product_relation_error"].get<double>(), 1e-12);
  EXPECT_GT(q.report["lyapunov"]["rho"].get<double>(), 0.0);
  EXPECT_TRUE(q.files.count("measures.csv"));
  c.h = 0;
  const CommandResult v = cmd_variational(c);
  EXPECT_TRUE(v.report["structure"]["ok"].get<bool>());
  EXPECT_TRUE(v.files.count("lp.mps"));
}

TEST(Commands, SimulateSmallRun) {
  RunConfig c;
  c.dt = 1e-3;
  c.paths = 4000;
  c.T = 1.0;
  const CommandResult r = cmd_simulate(c);
  EXPECT_EQ(r.report["qprocess"]["killed"], 0);
  EXPECT_NEAR(r.report["exit_rate"]["estimate"].get<double>(), 4.93, 0.5);
}

TEST(Commands, OutputDirectoryReceivesAllFiles) {
  RunConfig c;
  c.out = scratch_dir("outputs").string();
  validate_config(c);
  const CommandResult r = cmd_optimize(c);
  write_outputs(c, r);
  EXPECT_TRUE(fs::exists(fs::path(c.out) / "report.json"));
  for (const auto& [name, text] : r.files) EXPECT_EQ(slurp(fs::path(c.out) / name), text);
}

TEST(Verify, CriterionJsonOmitsTimings) {
  RunConfig c;
  const CriterionResult r = run_criterion(1, c);
  EXPECT_TRUE(r.pass);
  const Json j = criterion_to_json(r);
  EXPECT_FALSE(j.contains("seconds"));
  EXPECT_EQ(criterion_line(r).substr(0, 4), "PASS");
  EXPECT_THROW(run_criterion(16, c), Error);
}

TEST(Verify, ThreadInvarianceCriterion) {
  EXPECT_TRUE(run_criterion(15, RunConfig{}).pass);
}

TEST(Executable, MissingProblemFileExitsWithOne) {
  const CliRun r = run_cli("solve --problem /no/such/problem.json");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("error"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Executable, SolvePrintsJson) {
  const CliRun r = run_cli("solve --problem drift-interval:c=2 --h 0.03125");
  EXPECT_EQ(r.status, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["command"], "solve");
  EXPECT_NEAR(j["eigen"]["lambda"].get<double>(), 4.9348 + 2.0, 0.05);
}

TEST(Executable, BadModeIsAnError) {
  EXPECT_EQ(run_cli("optimize --mode SIDEWAYS").status, 1);
}
