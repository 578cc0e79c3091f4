// Acceptance runner: executes the CLI verify suite twice with different
// worker counts, prints one PASS/FAIL line per criterion and requires the two
// reports to be byte-identical.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kCriteria = 15;
constexpr int kSeed = 1;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_verify(const std::string& exe, const fs::path& dir, int threads) {
  const fs::path report = dir / ("report_threads" + std::to_string(threads) + ".json");
  const fs::path log = dir / ("log_threads" + std::to_string(threads) + ".txt");
  const std::string cmd = "EXITRATE_THREADS=" + std::to_string(threads) + " \"" + exe +
                          "\" verify --seed " + std::to_string(kSeed) + " > \"" +
                          report.string() + "\" 2> \"" + log.string() + "\"";
  std::cout << "running: " << cmd << std::endl;
  const int status = std::system(cmd.c_str());
  std::cout << slurp(log) << std::flush;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: exitrate_acceptance <exitrate executable> <work dir>\n";
    return 1;
  }
  const std::string exe = argv[1];
  const fs::path dir = argv[2];
  fs::create_directories(dir);

  const int status1 = run_verify(exe, dir, 1);
  const int status8 = run_verify(exe, dir, 8);
  const std::string text1 = slurp(dir / "report_threads1.json");
  const std::string text8 = slurp(dir / "report_threads8.json");

  nlohmann::ordered_json report;
  try {
    report = nlohmann::ordered_json::parse(text1);
  } catch (const std::exception& e) {
    std::cout << "FAIL: verify report is not valid JSON (exit status " << status1 << "): "
              << e.what() << '\n';
    return 1;
  }

  int failed = 0;
  std::cout << "\nacceptance criteria (seed " << kSeed << ")\n";
  const auto& criteria = report.at("criteria");
  for (int id = 1; id <= kCriteria; ++id) {
    const auto& c = criteria.at(static_cast<std::size_t>(id - 1));
    bool pass = c.at("pass").get<bool>();
    std::string note;
    if (id == kCriteria) {
      const bool identical = !text1.empty() && text1 == text8;
      pass = pass && identical && status8 == status1;
      note = identical ? " [reports byte-identical for 1 and 8 workers]"
                       : " [reports differ between 1 and 8 workers]";
    }
    if (!pass) ++failed;
    std::cout << (pass ? "PASS" : "FAIL") << ' ' << (id < 10 ? " " : "") << id << ' '
              << c.at("name").get<std::string>() << note << '\n'
              << "      " << c.at("details").dump() << '\n';
  }
  std::cout << '\n' << (kCriteria - failed) << '/' << kCriteria << " criteria passed\n";
  return failed == 0 && status1 == 0 ? 0 : 1;
}
