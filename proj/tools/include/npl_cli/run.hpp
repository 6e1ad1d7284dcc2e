#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "npl_cli/config.hpp"

namespace npl::cli {

inline constexpr const char* kVersion = "npl 1.0.0";

enum ExitCode : int { kSuccess = 0, kVerificationFailure = 1, kUsage = 2 };

/// Outcome of one command before anything is written.
struct Report {
  nlohmann::ordered_json results;
  bool passed = true;
  std::string failure;             // reason when !passed
  std::optional<std::string> csv;  // table for format = csv
};

/// Runs the command. Throws UsageError (or npl::DomainError) for inputs the
/// modules reject.
Report execute(const RunConfig& config);

/// {"config", "version", "timestamp", "results"}
nlohmann::ordered_json make_document(const RunConfig& config, const nlohmann::ordered_json& results,
                                     const std::string& timestamp);

std::string utc_timestamp();

struct RunOptions {
  std::optional<std::string> timestamp;  // fixed value for reproducible files
};

/// Executes and writes the declared outputs; returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err, const RunOptions& options = {});

/// Full command-line entry point.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace npl::cli
