#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ret14/config.hpp"

namespace ret14 {

inline constexpr const char* kToolName = "ret14";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitConfigError = 2, kExitRuntimeError = 3 };

struct VerifyOptions {
  std::vector<std::string> suites;  // overrides the config selection when non-empty
  int threads = 0;                  // 0: RET14_THREADS, else hardware concurrency
};

struct VerifyResult {
  nlohmann::ordered_json report;
  int exit_code = kExitPass;
};

/// Runs the selected suites. Suite statuses are "pass", "fail", "skip",
/// "skip-with-diagnostics" or "error"; exit_code is 3 if any suite raised,
/// else 1 if any failed, else 0. The report carries no timing or host data,
/// so identical configs give identical reports.
VerifyResult run_verify(const RunConfig& config, const VerifyOptions& options = {});

// Pretty-printed report with a trailing newline.
std::string serialize_report(const nlohmann::ordered_json& report);

/// Writes coefficients.csv, coefficients.json, projection.csv and
/// classical_limit.csv into out_dir (created if missing). Returns the paths
/// written. Throws std::filesystem::filesystem_error or Error on I/O failure.
std::vector<std::filesystem::path> run_export(const RunConfig& config,
                                              const std::filesystem::path& out_dir,
                                              int threads = 0);

// 17 significant digits, "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double x);

// RET14_THREADS if set and positive, else hardware concurrency (at least 1).
int default_thread_count();

/// Calls body(i) for i in [0, n) on up to threads workers. Results must be
/// written to per-index slots. The exception of the lowest failing index is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace ret14
