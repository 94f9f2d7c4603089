#include "skewspin/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace skewspin {
namespace {

using nlohmann::json;

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_number(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

}  // namespace

bool CheckResult::operator==(const CheckResult& o) const {
  if (name != o.name || citation != o.citation || !same(residual, o.residual) || !same(tolerance, o.tolerance) ||
      pass != o.pass || grid_points != o.grid_points || engine != o.engine || note != o.note || error != o.error ||
      values.size() != o.values.size())
    return false;
  for (const auto& [k, v] : values) {
    auto it = o.values.find(k);
    if (it == o.values.end() || !same(v, it->second)) return false;
  }
  return true;
}

CheckResult make_check(std::string name, std::string citation, double residual, double tolerance, int grid_points) {
  CheckResult c;
  c.name = std::move(name);
  c.citation = std::move(citation);
  c.residual = residual;
  c.tolerance = tolerance;
  c.pass = std::isfinite(residual) && residual <= tolerance;
  c.grid_points = grid_points;
  return c;
}

CheckResult failed_check(std::string name, std::string citation, double tolerance, std::string error) {
  CheckResult c = make_check(std::move(name), std::move(citation), std::numeric_limits<double>::quiet_NaN(), tolerance);
  c.error = std::move(error);
  return c;
}

bool CheckReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const CheckResult* CheckReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool CheckReport::operator==(const CheckReport& o) const {
  return target == o.target && params == o.params && checks == o.checks;
}

std::string to_json(const CheckReport& r, int indent) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json j{{"name", c.name},
           {"citation", c.citation},
           {"residual", number(c.residual)},
           {"tolerance", number(c.tolerance)},
           {"pass", c.pass},
           {"grid_points", c.grid_points},
           {"engine", c.engine}};
    if (!c.note.empty()) j["note"] = c.note;
    if (!c.error.empty()) j["error"] = c.error;
    if (!c.values.empty()) {
      json v = json::object();
      for (const auto& [k, x] : c.values) v[k] = number(x);
      j["values"] = v;
    }
    checks.push_back(j);
  }
  json top{{"target", r.target}, {"params", r.params}, {"checks", checks}, {"pass", r.pass()}};
  return top.dump(indent);
}

CheckReport report_from_json(const std::string& text) {
  const json top = json::parse(text);
  CheckReport r;
  r.target = top.at("target").get<std::string>();
  r.params = top.at("params").get<std::map<std::string, std::string>>();
  for (const auto& j : top.at("checks")) {
    CheckResult c;
    c.name = j.at("name").get<std::string>();
    c.citation = j.at("citation").get<std::string>();
    c.residual = read_number(j.at("residual"));
    c.tolerance = read_number(j.at("tolerance"));
    c.pass = j.at("pass").get<bool>();
    c.grid_points = j.value("grid_points", 0);
    c.engine = j.value("engine", std::string("ad"));
    c.note = j.value("note", std::string());
    c.error = j.value("error", std::string());
    if (j.contains("values"))
      for (const auto& [k, v] : j.at("values").items()) c.values[k] = read_number(v);
    r.checks.push_back(std::move(c));
  }
  return r;
}

std::string to_text(const CheckReport& r) {
  std::ostringstream os;
  os << "target: " << r.target << '\n';
  if (!r.params.empty()) {
    os << "params:";
    for (const auto& [k, v] : r.params) os << ' ' << k << '=' << v;
    os << '\n';
  }
  for (const auto& c : r.checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << "  residual=" << std::setprecision(3) << std::scientific
       << c.residual << " tol=" << c.tolerance << std::defaultfloat << " points=" << c.grid_points;
    if (c.engine != "ad") os << " engine=" << c.engine;
    os << "\n     [" << c.citation << "]";
    if (!c.note.empty()) os << "\n     note: " << c.note;
    if (!c.error.empty()) os << "\n     error: " << c.error;
    for (const auto& [k, v] : c.values) os << "\n     " << k << " = " << std::setprecision(12) << v;
    os << '\n';
  }
  os << (r.pass() ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << '\n';
  return os.str();
}

}  // namespace skewspin
