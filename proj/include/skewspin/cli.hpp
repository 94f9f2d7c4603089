#pragma once

// Run configuration, the declarative config-file format and the report
// driver behind the command-line tool.

#include <optional>
#include <stdexcept>
#include <string>

#include "skewspin/catalog.hpp"

namespace skewspin {

/// Malformed config file; the message carries line and column.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { text, json };

struct RunConfig {
  std::string target;  // catalog name or config file path
  std::map<std::string, std::string> params;
  std::string suite = "all";
  int grid = 0;  // 0 uses the entry default
  Tolerances tol;
  OutputFormat format = OutputFormat::text;
  std::string output;  // empty writes nothing
  bool cross_engine = true;
};

struct RunResult {
  int exit_status = 0;
  CheckReport report;
  std::string diagnostics;
  std::string rendered;  // report in the requested format
};

// Exit statuses.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConstraint = 3;

/// Parses the line-oriented `key = value` format with [sections] and '#'
/// comments into a custom entry. `overrides` replace `param.<name>` values.
CatalogEntry load_config(const std::string& path, const std::map<std::string, std::string>& overrides = {});
CatalogEntry parse_config(const std::string& text, const std::string& source = "<config>",
                          const std::map<std::string, std::string>& overrides = {});

/// Pairs each AD check with its finite-difference rerun by name.
std::vector<CheckResult> cross_engine_checks(const std::vector<CheckResult>& ad, const std::vector<CheckResult>& fd,
                                             double fd_tol);

RunResult run(const RunConfig& config);

}  // namespace skewspin
