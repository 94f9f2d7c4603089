#include "skewspin/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "skewspin/expr.hpp"

namespace skewspin {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Value {
  std::string text;
  int line = 0;
  int column = 0;  // 1-based column of the first character of text
};

[[noreturn]] void fail_at(const std::string& source, int line, int column, const std::string& msg) {
  throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg);
}

double to_number(const std::string& source, const Value& v) {
  double d = 0.0;
  const std::string t = trim(v.text);
  const char* first = t.data();
  if (!t.empty() && t[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), d);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    fail_at(source, v.line, v.column, "expected a number, got '" + v.text + "'");
  return d;
}

/// Splits on commas, keeping the column of each piece.
std::vector<Value> split_list(const Value& v) {
  std::vector<Value> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= v.text.size(); ++k) {
    if (k == v.text.size() || v.text[k] == ',') {
      const std::string piece = v.text.substr(start, k - start);
      const auto lead = piece.find_first_not_of(" \t");
      out.push_back({trim(piece), v.line, v.column + static_cast<int>(start + (lead == std::string::npos ? 0 : lead))});
      start = k + 1;
    }
  }
  return out;
}

class ConfigReader {
 public:
  ConfigReader(std::string source, const std::string& text) : source_(std::move(source)) {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      std::string body = raw;
      const auto hash = body.find('#');
      if (hash != std::string::npos) body = body.substr(0, hash);
      const std::string t = trim(body);
      if (t.empty()) continue;
      const int first_col = static_cast<int>(body.find_first_not_of(" \t")) + 1;
      if (t.front() == '[') {
        if (t.back() != ']') fail_at(source_, line, first_col, "unterminated section header");
        section = trim(t.substr(1, t.size() - 2));
        if (section.empty()) fail_at(source_, line, first_col, "empty section name");
        continue;
      }
      const auto eq = body.find('=');
      if (eq == std::string::npos) fail_at(source_, line, first_col, "expected 'key = value'");
      const std::string key = trim(body.substr(0, eq));
      if (key.empty()) fail_at(source_, line, first_col, "missing key before '='");
      const std::string rest = body.substr(eq + 1);
      const auto lead = rest.find_first_not_of(" \t");
      const std::string full = section.empty() ? key : section + "." + key;
      if (values_.count(full)) fail_at(source_, line, first_col, "duplicate key '" + full + "'");
      values_[full] = {trim(rest), line, static_cast<int>(eq) + 2 + static_cast<int>(lead == std::string::npos ? 0 : lead)};
      order_.push_back(full);
    }
  }

  const std::string& source() const { return source_; }
  bool has(const std::string& k) const { return values_.count(k) > 0; }
  const Value& at(const std::string& k) const { return values_.at(k); }
  const std::vector<std::string>& keys() const { return order_; }

  void mark(const std::string& k) { used_.insert(k); }
  void reject_unused() const {
    for (const auto& k : order_)
      if (!used_.count(k)) {
        const Value& v = values_.at(k);
        fail_at(source_, v.line, 1, "unknown key '" + k + "'");
      }
  }

 private:
  std::string source_;
  std::map<std::string, Value> values_;
  std::vector<std::string> order_;
  std::set<std::string> used_;
};

Expr parse_value(const ConfigReader& r, const Value& v, const std::set<std::string>& declared) {
  try {
    return parse(v.text, &declared);
  } catch (const ParseError& e) {
    fail_at(r.source(), v.line, v.column + static_cast<int>(e.offset()), e.message());
  }
}

std::string render(const CheckReport& report, OutputFormat f) {
  return f == OutputFormat::json ? to_json(report) + "\n" : to_text(report);
}

}  // namespace

CatalogEntry parse_config(const std::string& text, const std::string& source,
                          const std::map<std::string, std::string>& overrides) {
  ConfigReader r(source, text);
  if (!r.has("dimension")) throw ConfigError(source + ": missing required key 'dimension'");
  r.mark("dimension");
  const double dnum = to_number(source, r.at("dimension"));
  if (dnum != 2 && dnum != 3) fail_at(source, r.at("dimension").line, r.at("dimension").column, "dimension must be 2 or 3");
  const int dim = static_cast<int>(dnum);

  std::vector<std::string> coords = dim == 2 ? std::vector<std::string>{"x", "y"} : std::vector<std::string>{"x", "y", "z"};
  if (r.has("coordinates")) {
    r.mark("coordinates");
    coords.clear();
    for (const Value& v : split_list(r.at("coordinates"))) {
      if (v.text.empty()) fail_at(source, v.line, v.column, "empty coordinate name");
      coords.push_back(v.text);
    }
    if (static_cast<int>(coords.size()) != dim)
      fail_at(source, r.at("coordinates").line, r.at("coordinates").column,
              "expected " + std::to_string(dim) + " coordinates");
  }

  std::map<std::string, double> params;
  for (const auto& k : r.keys())
    if (k.rfind("param.", 0) == 0) {
      r.mark(k);
      params[k.substr(6)] = to_number(source, r.at(k));
    }
  for (const auto& [k, v] : overrides) {
    if (!params.count(k)) throw std::invalid_argument("unknown parameter '" + k + "' for " + source);
    params[k] = to_number(source, {v, 0, 0});
  }
  std::set<std::string> declared(coords.begin(), coords.end());
  for (const auto& [k, v] : params) declared.insert(k);
  auto expr_field = [&](const std::string& key) {
    r.mark(key);
    return ScalarField::from_expr(parse_value(r, r.at(key), declared), coords, params);
  };

  std::vector<Interval> bounds(dim);
  for (int i = 0; i < dim; ++i) {
    const std::string key = "bounds." + coords[i];
    if (!r.has(key)) continue;
    r.mark(key);
    const auto parts = split_list(r.at(key));
    if (parts.size() != 2) fail_at(source, r.at(key).line, r.at(key).column, "bounds need 'lo, hi'");
    bounds[i] = {to_number(source, parts[0]), to_number(source, parts[1])};
    if (!(bounds[i].lo < bounds[i].hi)) fail_at(source, r.at(key).line, r.at(key).column, "bounds need lo < hi");
  }

  bool structural = false;
  std::vector<std::vector<std::vector<ScalarField>>> c(
      dim, std::vector<std::vector<ScalarField>>(dim, std::vector<ScalarField>(dim)));
  for (const auto& k : r.keys()) {
    if (k.rfind("structure.", 0) != 0) continue;
    const std::string idx = k.substr(10);
    const Value& v = r.at(k);
    if (idx.size() != 4 || idx[2] != '.') fail_at(source, v.line, 1, "structure keys look like structure.<i><j>.<k>");
    const int i = idx[0] - '1', j = idx[1] - '1', l = idx[3] - '1';
    if (i < 0 || j < 0 || l < 0 || i >= dim || j >= dim || l >= dim) fail_at(source, v.line, 1, "index out of range");
    c[i][j][l] = expr_field(k);
    if (!c[i][j][l].is_constant()) fail_at(source, v.line, v.column, "structure constants must be constant");
    c[j][i][l] = ScalarField::constant(-c[i][j][l].value({}));
    structural = true;
  }

  std::vector<std::vector<ScalarField>> frame(dim, std::vector<ScalarField>(dim));
  for (int i = 0; i < dim; ++i) frame[i][i] = ScalarField::constant(1.0);
  bool has_frame = false;
  for (int i = 0; i < dim; ++i) {
    const std::string key = "frame." + std::to_string(i + 1);
    if (!r.has(key)) continue;
    r.mark(key);
    has_frame = true;
    const auto parts = split_list(r.at(key));
    if (static_cast<int>(parts.size()) != dim)
      fail_at(source, r.at(key).line, r.at(key).column, "frame vectors need " + std::to_string(dim) + " components");
    for (int mu = 0; mu < dim; ++mu)
      frame[i][mu] = ScalarField::from_expr(parse_value(r, parts[mu], declared), coords, params);
  }
  if (structural && has_frame) throw ConfigError(source + ": give either frame.* or structure.*, not both");

  CatalogEntry e;
  e.name = source;
  e.description = "custom entry from " + source;
  e.citation = "config file";
  for (const auto& [k, v] : params) e.params[k] = format_number(v);
  e.default_grid = dim == 3 ? 11 : 21;
  const FrameChart base =
      structural ? FrameChart::structural(coords, bounds, c) : FrameChart::coordinate(coords, bounds, frame);

  const char* comps[4] = {"spinor.re1", "spinor.im1", "spinor.re2", "spinor.im2"};
  bool has_spinor = false;
  std::array<ScalarField, 4> sp;
  for (int k = 0; k < 4; ++k) {
    sp[k] = ScalarField::constant(0.0);
    if (r.has(comps[k])) {
      sp[k] = expr_field(comps[k]);
      has_spinor = true;
    }
  }
  if (has_spinor) e.psi = SpinorSection(sp);

  bool has_a = false;
  std::vector<std::vector<ScalarField>> a(dim, std::vector<ScalarField>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      a[i][j] = ScalarField::constant(0.0);
      const std::string key = "A." + std::to_string(i + 1) + std::to_string(j + 1);
      if (r.has(key)) {
        a[i][j] = expr_field(key);
        has_a = true;
      }
    }
  if (has_a)
    e.a = EndoField(a);
  else if (has_spinor && !r.has("u"))
    e.a = EndoField::zero(dim);

  if (r.has("mode")) {
    r.mark("mode");
    const Value& v = r.at("mode");
    if (v.text == "real")
      e.mode = KillingMode::real;
    else if (v.text == "imaginary")
      e.mode = KillingMode::imaginary;
    else
      fail_at(source, v.line, v.column, "mode is 'real' or 'imaginary'");
  }

  if (r.has("u")) {
    if (dim != 3) fail_at(source, r.at("u").line, 1, "a conformal potential u needs dimension 3");
    if (structural) fail_at(source, r.at("u").line, 1, "a conformal potential u needs a coordinate frame");
    const ScalarField u = expr_field("u");
    const FrameChart bar = base.rescaled(u);
    e.chart = bar;
    if (!e.a) e.a = conformal_endomorphism(bar, u);
    add_standard_suites(e);
    if (e.psi) {
      const SpinorSection psi = *e.psi;
      e.add_suite("conformal", [base, psi, u](const SuiteContext& ctx) {
        return parallel_to_skew(base, psi, u, ctx.grid, ctx.tol.ad(1e-7)).checks;
      });
    }
  } else {
    e.chart = base;
    add_standard_suites(e);
  }
  r.reject_unused();
  return e;
}

CatalogEntry load_config(const std::string& path, const std::map<std::string, std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path, overrides);
}

std::vector<CheckResult> cross_engine_checks(const std::vector<CheckResult>& ad, const std::vector<CheckResult>& fd,
                                             double fd_tol) {
  std::vector<CheckResult> out;
  std::vector<bool> used(fd.size(), false);
  for (const auto& a : ad) {
    if (!a.error.empty()) continue;  // already failing on its own
    std::size_t match = fd.size();
    for (std::size_t k = 0; k < fd.size(); ++k)
      if (!used[k] && fd[k].name == a.name) {
        match = k;
        break;
      }
    if (match == fd.size()) {
      out.push_back(failed_check("cross-engine: " + a.name, "finite-difference reproduction", fd_tol,
                                 "no finite-difference counterpart"));
      continue;
    }
    used[match] = true;
    const CheckResult& f = fd[match];
    CheckResult c = f.error.empty()
                        ? make_check("cross-engine: " + a.name, "finite-difference reproduction",
                                     std::abs(a.residual - f.residual), fd_tol, f.grid_points)
                        : failed_check("cross-engine: " + a.name, "finite-difference reproduction", fd_tol, f.error);
    c.engine = "fd";
    c.values["ad residual"] = a.residual;
    c.values["fd residual"] = f.residual;
    out.push_back(c);
  }
  return out;
}

RunResult run(const RunConfig& config) {
  RunResult res;
  res.report.target = config.target;
  auto fail = [&](int status, const std::string& msg) {
    res.exit_status = status;
    res.diagnostics = msg;
    return res;
  };
  if (config.grid != 0 && config.grid < 3) return fail(kExitUsage, "grid resolution must be at least 3");
  if (config.tol.ad_override && !(*config.tol.ad_override > 0)) return fail(kExitUsage, "tolerances must be positive");
  if (!(config.tol.fd_tol > 0) || !(config.tol.fd_step > 0)) return fail(kExitUsage, "tolerances must be positive");
  if (config.suite != "all" && std::find(kSuiteNames.begin(), kSuiteNames.end(), config.suite) == kSuiteNames.end())
    return fail(kExitUsage, "unknown suite '" + config.suite + "'");

  CatalogEntry entry;
  try {
    const auto names = catalog_names();
    if (std::find(names.begin(), names.end(), config.target) != names.end())
      entry = build(config.target, config.params);
    else if (std::filesystem::exists(config.target))
      entry = load_config(config.target, config.params);
    else
      return fail(kExitUsage, "unknown target '" + config.target + "': not a catalog entry or readable file");
  } catch (const ConstraintError& e) {
    return fail(kExitConstraint, std::string("constraint violation: ") + e.what());
  } catch (const std::exception& e) {
    return fail(kExitUsage, e.what());
  }
  res.report.params = entry.params;

  SuiteContext ctx;
  ctx.grid.n = config.grid ? config.grid : entry.default_grid;
  ctx.tol = config.tol;
  ctx.grid.eval.fd_step = config.tol.fd_step;
  const std::vector<CheckResult> ad = entry.run(config.suite, ctx);
  res.report.add(ad);
  if (config.cross_engine) {
    SuiteContext fd_ctx = ctx;
    fd_ctx.grid.eval.engine = Engine::fd;
    res.report.add(cross_engine_checks(ad, entry.run(config.suite, fd_ctx), config.tol.fd_tol));
  }
  if (res.report.checks.empty()) return fail(kExitUsage, "entry '" + entry.name + "' has no '" + config.suite + "' suite");
  res.exit_status = res.report.pass() ? kExitPass : kExitCheckFailed;
  res.rendered = render(res.report, config.format);
  if (!config.output.empty()) {
    std::ofstream out(config.output);
    if (!out) return fail(kExitUsage, "cannot write '" + config.output + "'");
    out << res.rendered;
  }
  return res;
}

}  // namespace skewspin
