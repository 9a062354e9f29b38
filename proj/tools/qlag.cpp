#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlag/report.hpp"
#include "qlag/suite.hpp"

namespace {

std::pair<std::string, std::string> split_assignment(const std::string& s, const char* flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0)
    throw CLI::ValidationError(std::string(flag), "expected KEY=VALUE, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify Lagrangian H-umbilical submanifolds of quaternion space numerically"};

  std::string family = "pseudo_sphere";
  std::vector<std::string> params;
  std::string suite = "all";
  qlag::GridSpec grid;
  std::vector<std::string> tols;
  std::string format = "json";
  std::uint64_t seed = 1;
  std::string out;
  bool timing = false;
  bool list = false;

  app.add_option("--family", family, "Family name")->capture_default_str();
  app.add_option("--param", params, "Family parameter KEY=VALUE (repeatable)");
  app.add_option("--suite", suite, "Check suite")->capture_default_str()->check(CLI::IsMember(qlag::suite_names()));
  app.add_option("--grid", grid.per_coord, "Grid nodes per coordinate")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--step", grid.step, "Finite-difference step")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--tol", tols, "Tolerance override NAME=VALUE; NAME is a check or a class (repeatable)");
  app.add_option("--format", format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "table", "csv-profiles"}));
  app.add_option("--seed", seed, "Seed for random probe planes")->capture_default_str();
  app.add_option("--out", out, "Write the report to FILE instead of stdout");
  app.add_flag("--timing", timing, "Record wall time in the report");
  app.add_flag("--list", list, "List families and suites");

  CLI11_PARSE(app, argc, argv);

  if (list) {
    std::cout << "families:";
    for (const auto& f : qlag::family_names()) std::cout << ' ' << f;
    std::cout << "\nsuites:";
    for (const auto& s : qlag::suite_names()) std::cout << ' ' << s;
    std::cout << '\n';
    return 0;
  }

  try {
    qlag::FamilySpec spec{family, {}};
    for (const auto& p : params) {
      auto [k, v] = split_assignment(p, "--param");
      spec.params[k] = v;
    }
    qlag::Tolerances tol;
    for (const auto& t : tols) {
      auto [k, v] = split_assignment(t, "--tol");
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(v, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != v.size() || !(value >= 0.0)) throw CLI::ValidationError("--tol", "bad tolerance '" + v + "'");
      tol.set(k, value);
    }

    const auto report = qlag::run_suite(spec, suite, grid, tol, seed, timing);
    const std::string text = qlag::emit_report(report, qlag::report_format_from_string(format));
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out, std::ios::binary);
      if (!f) {
        std::cerr << "qlag: cannot open " << out << '\n';
        return 2;
      }
      f << text;
    }
    return report.all_pass() ? 0 : 1;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const qlag::GeometryError& e) {
    std::cerr << "qlag: " << e.what() << '\n';
    return 2;
  }
}
