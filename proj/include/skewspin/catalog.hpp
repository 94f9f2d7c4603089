#pragma once

// Built-in manifolds with spinors and endomorphism fields, each carrying the
// check suites it is expected to pass at its default parameters.

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewspin/report.hpp"
#include "skewspin/skewcheck.hpp"
#include "skewspin/spinfield.hpp"

namespace skewspin {

/// A parameter set violating one of an entry's defining relations.
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ParamSpec {
  std::string name;
  std::string default_value;
  std::string description;
};

/// Tolerance profile. When `ad_override` is set it replaces every AD
/// tolerance; otherwise each check keeps its own default.
struct Tolerances {
  std::optional<double> ad_override;
  double fd_tol = 1e-4;
  double fd_step = 1e-4;

  double ad(double fallback) const { return ad_override ? *ad_override : fallback; }
};

struct SuiteContext {
  GridOptions grid;
  Tolerances tol;
};

using SuiteFn = std::function<std::vector<CheckResult>(const SuiteContext&)>;

inline const std::vector<std::string> kSuiteNames{"skew",      "gauss-codazzi", "integrability", "conformal",
                                                  "curvature", "twistor",       "diagnostics"};

struct CatalogEntry {
  std::string name;
  std::string description;
  std::string citation;
  std::vector<ParamSpec> schema;
  std::map<std::string, std::string> params;  // resolved values

  std::optional<FrameChart> chart;
  std::optional<SpinorSection> psi;
  std::optional<EndoField> a;
  KillingMode mode = KillingMode::real;

  /// Grid points per axis used unless the caller overrides it.
  int default_grid = 11;
  /// Suites in execution order.
  std::vector<std::pair<std::string, SuiteFn>> suites;

  std::vector<std::string> suite_names() const;
  bool has_suite(const std::string& suite) const;
  /// Runs one suite, or every suite for "all".
  std::vector<CheckResult> run(const std::string& suite, const SuiteContext& ctx) const;
  void add_suite(const std::string& suite, SuiteFn fn);
};

std::vector<std::string> catalog_names();
/// Parameter schema of a catalog entry.
std::vector<ParamSpec> catalog_schema(const std::string& name);
std::string catalog_description(const std::string& name);

/// Builds an entry; unknown names and parameters throw std::invalid_argument,
/// violated relations throw ConstraintError.
CatalogEntry build(const std::string& name, const std::map<std::string, std::string>& overrides = {});

/// Adds the suites that apply to whatever data the entry carries.
void add_standard_suites(CatalogEntry& entry);

/// The two Killing spinors of a stereographic chart of the round sphere of
/// curvature 4 lambda^2 (E_i = lambda (1 + r^2) d_i): sign +1 gives Killing
/// constant +lambda, sign -1 gives -lambda.
SpinorSection sphere_killing_spinor(const Spinor& psi0, double sign);
/// Imaginary Killing spinor on the disk chart of curvature -4 lambda^2
/// (E_i = lambda (1 - r^2) d_i), Killing constant i sign lambda.
SpinorSection hyperbolic_killing_spinor(const Spinor& psi0, double sign);

}  // namespace skewspin
