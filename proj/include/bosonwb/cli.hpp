// Command-line orchestration and run manifests.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bosonwb/config.hpp"
#include "bosonwb/report.hpp"
#include "json.hpp"

namespace bw::cli {

enum ExitCode { kOk = 0, kViolation = 1, kHypothesis = 2, kUsage = 3 };

int exit_code(Status s);

struct RunOptions {
  std::filesystem::path out = "run";
  std::vector<std::string> checks{"all"};
  std::string sweep;  // empty for a single run
  int threads = 0;    // 0 keeps the OpenMP default
};

// Owns a run directory for the lifetime of the object.
class RunLock {
 public:
  explicit RunLock(const std::filesystem::path& dir);
  ~RunLock();
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::filesystem::path file_;
};

struct CommandResult {
  nlohmann::json manifest;
  Status status = Status::Pass;
};

CommandResult cmd_solve(const RunConfig& c, const std::filesystem::path& out);
CommandResult cmd_tail(const RunConfig& c, const std::filesystem::path& out);
CommandResult cmd_suite(const RunConfig& c, const std::filesystem::path& out, const std::vector<std::string>& checks);
CommandResult cmd_agsp(const RunConfig& c, const std::filesystem::path& out);
CommandResult cmd_entangle(const RunConfig& c, const std::filesystem::path& out);

std::vector<std::string> suite_check_names();

// Dispatches one command by name, honouring --sweep; writes manifest.json.
int run_command(const std::string& command, const RunConfig& c, const RunOptions& o);
int main(int argc, char** argv);

}  // namespace bw::cli
