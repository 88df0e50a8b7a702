#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace lscsp::cli {

struct GenerateOptions {
  int class_id = 1;
  std::uint64_t seed = 0;
  int count = 1;
  std::string out = ".";
};

struct SolveCommandOptions {
  std::string instance;
  int group = 3;
  std::string method = "epsilon";
  int points = 50;
  int n_patterns = 15;
  double time_limit_s = 600.0; ///< per scalarized solve
  long long node_limit = 10'000'000;
  int threads = 0; ///< 0 picks the hardware concurrency
  std::string out;
  std::string solutions_out; ///< optional per-point plan dump (JSON)
  std::string lp_out;        ///< optional LP text dump of the base model
};

struct AnalyzeOptions {
  std::string fronts; ///< glob pattern
  std::string out = ".";
};

/// Paths written and an exit status (0 iff every requested solve was optimal).
struct CommandResult {
  int exit_code = 0;
  std::vector<std::string> written;
  nlohmann::json manifest;
};

CommandResult cmd_generate(const GenerateOptions &options);
CommandResult cmd_solve(const SolveCommandOptions &options);
CommandResult cmd_analyze(const AnalyzeOptions &options);

/// `front.csv` -> `front.manifest.json`.
[[nodiscard]] std::string manifest_path(const std::string &output);
/// Class id parsed from a `class{c}_seed{s}` file name; 0 when absent.
[[nodiscard]] int class_from_filename(const std::string &path);

/// Entry point used by tools/main.cpp.
int run(int argc, char **argv);

} // namespace lscsp::cli
