#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace skewspin {

struct CheckResult {
  std::string name;
  std::string citation;
  double residual = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  bool pass = false;
  int grid_points = 0;
  std::string engine = "ad";
  std::string note;
  std::string error;  // evaluation fault, if any
  std::map<std::string, double> values;

  bool operator==(const CheckResult& o) const;
};

/// residual <= tolerance decides the verdict; NaN fails.
CheckResult make_check(std::string name, std::string citation, double residual, double tolerance, int grid_points = 1);
CheckResult failed_check(std::string name, std::string citation, double tolerance, std::string error);

struct CheckReport {
  std::string target;
  std::map<std::string, std::string> params;
  std::vector<CheckResult> checks;

  bool pass() const;
  void add(CheckResult c) { checks.push_back(std::move(c)); }
  void add(const std::vector<CheckResult>& cs) { checks.insert(checks.end(), cs.begin(), cs.end()); }
  const CheckResult* find(const std::string& name) const;
  bool operator==(const CheckReport& o) const;
};

std::string to_json(const CheckReport& r, int indent = 2);
CheckReport report_from_json(const std::string& text);
std::string to_text(const CheckReport& r);

}  // namespace skewspin
