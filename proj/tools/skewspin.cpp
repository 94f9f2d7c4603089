#include <CLI11.hpp>
#include <iomanip>
#include <iostream>

#include "skewspin/cli.hpp"
#include "skewspin/expr.hpp"

using namespace skewspin;

namespace {

std::map<std::string, std::string> parse_assignments(const std::vector<std::string>& items) {
  std::map<std::string, std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto comma = item.find(',', start);
      const std::string piece = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      const auto eq = piece.find('=');
      if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("expected name=value, got '" + piece + "'");
      out[piece.substr(0, eq)] = piece.substr(eq + 1);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

int cmd_list() {
  for (const auto& name : catalog_names()) std::cout << std::left << std::setw(28) << name << catalog_description(name) << "\n";
  return kExitPass;
}

int cmd_describe(const std::string& name) {
  const CatalogEntry e = build(name);
  std::cout << e.name << "\n  " << e.description << "\n  source: " << e.citation << "\n";
  if (!e.schema.empty()) {
    std::cout << "parameters:\n";
    for (const auto& p : e.schema)
      std::cout << "  " << std::left << std::setw(12) << p.name << std::setw(10) << p.default_value << p.description
                << "\n";
  }
  std::cout << "suites:";
  for (const auto& s : e.suite_names()) std::cout << " " << s;
  std::cout << "\ndefault grid: " << e.default_grid << "\n";
  return kExitPass;
}

int cmd_eval(const std::string& text, const std::vector<std::string>& at, const std::vector<std::string>& params) {
  const auto point_map = parse_assignments(at);
  std::vector<std::string> coords;
  std::vector<double> point;
  for (const auto& [k, v] : point_map) {
    coords.push_back(k);
    point.push_back(std::stod(v));
  }
  std::map<std::string, double> pvals;
  for (const auto& [k, v] : parse_assignments(params)) pvals[k] = std::stod(v);
  std::set<std::string> declared(coords.begin(), coords.end());
  for (const auto& [k, v] : pvals) declared.insert(k);
  const Expr e = parse(text, &declared);
  const DiffScalar d = eval_diff(e, coords, point, pvals);
  std::cout << std::setprecision(15) << "value " << d.value << "\n";
  for (std::size_t i = 0; i < coords.size(); ++i) std::cout << "d/d" << coords[i] << " " << d.grad[i] << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check skew Killing spinors and endomorphism fields on low-dimensional frames"};
  app.require_subcommand(1);

  app.add_subcommand("list", "List catalog entries");

  auto* describe = app.add_subcommand("describe", "Show an entry's parameters and suites");
  std::string describe_name;
  describe->add_option("entry", describe_name, "Catalog entry")->required();

  auto* check = app.add_subcommand("check", "Run check suites on a catalog entry or config file");
  RunConfig cfg;
  std::vector<std::string> params;
  std::string format = "text";
  double tol = 0.0;
  bool no_cross = false;
  check->add_option("target", cfg.target, "Catalog entry or config file")->required();
  check->add_option("--suite", cfg.suite, "Suite name or 'all'");
  check->add_option("--grid", cfg.grid, "Grid points per axis");
  check->add_option("--tol", tol, "Override every AD tolerance");
  check->add_option("--fd-tol", cfg.tol.fd_tol, "Cross-engine tolerance");
  check->add_option("--fd-step", cfg.tol.fd_step, "Finite-difference step");
  check->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  check->add_option("--param", params, "name=value, repeatable");
  check->add_option("--output", cfg.output, "Write the report to a file");
  check->add_flag("--no-cross-engine", no_cross, "Skip the finite-difference rerun");

  auto* eval = app.add_subcommand("eval", "Evaluate an expression with its gradient");
  std::string expr_text;
  std::vector<std::string> at, eval_params;
  eval->add_option("expr", expr_text, "Expression")->required();
  eval->add_option("--at", at, "coordinate=value list");
  eval->add_option("--param", eval_params, "name=value list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand("describe")) return cmd_describe(describe_name);
    if (app.got_subcommand("eval")) return cmd_eval(expr_text, at, eval_params);

    cfg.params = parse_assignments(params);
    if (check->count("--tol")) cfg.tol.ad_override = tol;
    cfg.format = format == "json" ? OutputFormat::json : OutputFormat::text;
    cfg.cross_engine = !no_cross;
    const RunResult r = run(cfg);
    if (!r.diagnostics.empty()) std::cerr << "error: " << r.diagnostics << "\n";
    if (cfg.output.empty()) std::cout << r.rendered;
    return r.exit_status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
